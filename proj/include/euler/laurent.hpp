// Sparse Laurent polynomials with exact rational coefficients.
#pragma once

#include "euler/rational.hpp"

#include <nlohmann/json_fwd.hpp>

#include <map>
#include <string>
#include <vector>

namespace euler {

// Total degree ascending, ties broken by descending lexicographic order,
// so "1 + x1 + x2 + x1^2 + x1*x2 + x2^2".
struct GradedLexLess {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

class LaurentPolynomial {
 public:
  using TermMap = std::map<Exponent, Rational, GradedLexLess>;

  LaurentPolynomial() = default;
  explicit LaurentPolynomial(size_t nvars) : nvars_(nvars) {}

  static LaurentPolynomial constant(size_t nvars, const Rational& c);
  static LaurentPolynomial monomial(const Exponent& e, const Rational& c = 1);
  static LaurentPolynomial variable(size_t nvars, size_t j);

  size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  // Adds c·x^e, dropping the term if it cancels.
  void add_term(const Exponent& e, const Rational& c);
  Rational coefficient(const Exponent& e) const;

  std::vector<Exponent> support() const;
  bool has_positive_coefficients() const;
  bool has_negative_exponents() const;
  // Componentwise minimum exponent over the support.
  Exponent min_exponents() const;
  // Largest total degree of a term (requires nonnegative exponents to be a degree).
  int total_degree() const;

  LaurentPolynomial operator-() const;
  friend LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b);
  friend LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b);
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b);
  friend LaurentPolynomial operator*(const Rational& c, const LaurentPolynomial& a);
  LaurentPolynomial& operator+=(const LaurentPolynomial& b);
  LaurentPolynomial& operator*=(const LaurentPolynomial& b);
  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  // Multiply by x^shift.
  LaurentPolynomial shifted(const Exponent& shift) const;
  LaurentPolynomial pow(unsigned k) const;

 private:
  size_t nvars_ = 0;
  TermMap terms_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  size_t position() const { return pos_; }

 private:
  size_t pos_;
};

// Grammar: sums of products of integers, variables, parenthesised
// subexpressions and powers (x^-2 allowed). Division only by integer literals.
LaurentPolynomial parse(const std::string& text, const std::vector<std::string>& vars);
std::string to_string(const LaurentPolynomial& f, const std::vector<std::string>& vars);
std::vector<std::string> default_vars(size_t n, const std::string& stem = "x");

nlohmann::json to_json(const LaurentPolynomial& f, const std::vector<std::string>& vars);
LaurentPolynomial polynomial_from_json(const nlohmann::json& j, std::vector<std::string>* vars = nullptr);

cplx evaluate(const LaurentPolynomial& f, const std::vector<cplx>& x);
LaurentPolynomial partial(const LaurentPolynomial& f, size_t j);
// Euler derivative x_j d/dx_j.
LaurentPolynomial theta(const LaurentPolynomial& f, size_t j);

// Coefficients and exponents flattened for repeated numeric evaluation.
template <class T>
struct CompiledPolynomial {
  size_t nvars = 0;
  std::vector<T> coeffs;
  std::vector<Exponent> exps;

  CompiledPolynomial() = default;
  template <class Conv>
  CompiledPolynomial(const LaurentPolynomial& f, Conv conv) : nvars(f.nvars()) {
    for (const auto& [e, c] : f.terms()) {
      exps.push_back(e);
      coeffs.push_back(conv(c));
    }
  }
  T operator()(const std::vector<T>& x) const {
    T sum = T(0);
    for (size_t t = 0; t < coeffs.size(); ++t) {
      T m = coeffs[t];
      for (size_t j = 0; j < nvars; ++j) {
        int k = exps[t][j];
        if (k == 0) continue;
        T base = k > 0 ? x[j] : T(1) / x[j];
        for (int r = 0; r < std::abs(k); ++r) m *= base;
      }
      sum += m;
    }
    return sum;
  }
};

// A polynomial whose coefficients are linear forms in opaque symbols
// (kinematic variables). Keys of the inner map are symbol names.
struct KinematicPolynomial {
  using Form = std::map<std::string, Rational>;
  size_t nvars = 0;
  std::map<Exponent, Form, GradedLexLess> terms;

  void add_term(const Exponent& e, const std::string& symbol, const Rational& c);
  LaurentPolynomial substitute(const std::map<std::string, Rational>& values) const;
  std::vector<std::string> symbols() const;
};
std::string to_string(const KinematicPolynomial& f, const std::vector<std::string>& vars);

struct Graph {
  int vertices = 0;
  // Edge k joins edges[k].first and edges[k].second (0-based vertices);
  // its Schwinger parameter is x_{k+1}.
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, std::string>> legs;
};
Graph graph_from_json(const nlohmann::json& j);

struct SymanzikPolynomials {
  LaurentPolynomial U;
  KinematicPolynomial F;
};
SymanzikPolynomials symanzik(const Graph& g);

// Minors of the 2×m matrix parametrising the positive part of M_{0,m}.
std::vector<LaurentPolynomial> moduli_minors(int m);

}  // namespace euler
