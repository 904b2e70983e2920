// Symbolic helpers shared by the operator modules: polynomial substitution,
// exact rational functions in parameter symbols, and Weyl-algebra operators
// whose coefficients are polynomials in those symbols.
#pragma once

#include "euler/laurent.hpp"

#include <nlohmann/json_fwd.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace euler {

// f with variable j replaced by the polynomial value (same variable count,
// nonnegative exponent of j required).
LaurentPolynomial substitute(const LaurentPolynomial& f, size_t j, const LaurentPolynomial& value);
// f(x_1, ..., x_j + a, ...).
LaurentPolynomial shift_variable(const LaurentPolynomial& f, size_t j, const Rational& a);
Rational evaluate_exact(const LaurentPolynomial& f, const RatVec& x);
// a / b when b divides a exactly (multivariate division in graded order).
std::optional<LaurentPolynomial> divide_exact(const LaurentPolynomial& a, const LaurentPolynomial& b);
// Coefficient of the leading (last in graded order) term.
Rational leading_coefficient(const LaurentPolynomial& f);
// Coefficient of the first printed (lowest in graded order) term.
Rational first_coefficient(const LaurentPolynomial& f);

// num/den with den monic in its leading term; den is constant 1 whenever
// den divides num. No gcd beyond that.
class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(size_t nvars);
  RationalFunction(LaurentPolynomial num);
  RationalFunction(LaurentPolynomial num, LaurentPolynomial den);
  static RationalFunction constant(size_t nvars, const Rational& c);

  const LaurentPolynomial& num() const { return num_; }
  const LaurentPolynomial& den() const { return den_; }
  size_t nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const;

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction operator-() const;
  // Equality as functions (cross-multiplication).
  friend bool operator==(const RationalFunction& a, const RationalFunction& b);

  RationalFunction shifted(size_t j, const Rational& a) const;
  // Throws std::domain_error at a pole.
  Rational evaluate(const RatVec& x) const;
  cplx evaluate(const std::vector<cplx>& x) const;

 private:
  void normalize();
  LaurentPolynomial num_;
  LaurentPolynomial den_;
};

std::string to_string(const RationalFunction& f, const std::vector<std::string>& vars);

// Parameter symbols s (or s1..sl) followed by nu (or nu1..nun).
std::vector<std::string> parameter_names(size_t ell, size_t n);

// Sum of c(params) x^a d^b with all x to the left of all d.
class WeylOperator {
 public:
  struct Key {
    Exponent x;
    Exponent d;
  };
  // d total degree descending, then d lexicographically descending, then the
  // same for x.
  struct KeyLess {
    bool operator()(const Key& a, const Key& b) const;
  };
  using TermMap = std::map<Key, LaurentPolynomial, KeyLess>;

  WeylOperator() = default;
  WeylOperator(size_t nvars, size_t nparams) : nvars_(nvars), nparams_(nparams) {}

  static WeylOperator constant(size_t nvars, const LaurentPolynomial& c);
  static WeylOperator constant(size_t nvars, size_t nparams, const Rational& c);
  static WeylOperator variable(size_t nvars, size_t nparams, size_t j);
  static WeylOperator derivative(size_t nvars, size_t nparams, size_t j, int power = 1);
  // x_j d_j.
  static WeylOperator theta(size_t nvars, size_t nparams, size_t j);

  size_t nvars() const { return nvars_; }
  size_t nparams() const { return nparams_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const Exponent& x, const Exponent& d, const LaurentPolynomial& c);

  WeylOperator operator-() const;
  friend WeylOperator operator+(const WeylOperator& a, const WeylOperator& b);
  friend WeylOperator operator-(const WeylOperator& a, const WeylOperator& b);
  // Product in the Weyl algebra (d_j x_j = x_j d_j + 1).
  friend WeylOperator operator*(const WeylOperator& a, const WeylOperator& b);
  friend WeylOperator operator*(const LaurentPolynomial& c, const WeylOperator& a);
  friend bool operator==(const WeylOperator& a, const WeylOperator& b);

  // Sign flipped, if needed, so the first printed rational of the first
  // term's coefficient is positive.
  WeylOperator normalized() const;
  // Parameters replaced by exact values.
  WeylOperator substitute_parameters(const RatVec& values) const;

 private:
  size_t nvars_ = 0;
  size_t nparams_ = 0;
  TermMap terms_;
};

// Derivatives print as d[<label>]: the 1-based index when index_labels is
// set (z systems), otherwise the variable name (d[t1]).
std::string to_string(const WeylOperator& op, const std::vector<std::string>& vars,
                      const std::vector<std::string>& params, bool index_labels = false);
nlohmann::json to_json(const WeylOperator& op, const std::vector<std::string>& vars,
                       const std::vector<std::string>& params, bool index_labels = false);

}  // namespace euler
