// Shift (difference) operators in the parameters (s, nu) of an Euler
// integral: annihilator generators, Pochhammer symbols, beta-family
// reduction and numeric verification by quadrature.
#pragma once

#include "euler/integrate.hpp"
#include "euler/spec.hpp"
#include "euler/symbolic.hpp"

#include <nlohmann/json_fwd.hpp>

#include <functional>

namespace euler {

// sum_k c_k(s, nu) sigma^k with coefficients on the left; sigma_{s_i} and
// sigma_{nu_j} raise s_i and nu_j by one, and sigma g(p) = g(p + e) sigma.
class ShiftOperator {
 public:
  using TermMap = std::map<IntVec, RationalFunction>;

  ShiftOperator() = default;
  ShiftOperator(size_t ell, size_t n) : ell_(ell), n_(n) {}

  static ShiftOperator constant(size_t ell, size_t n, const RationalFunction& c);
  static ShiftOperator constant(size_t ell, size_t n, const Rational& c);
  // sigma^shift.
  static ShiftOperator monomial(size_t ell, size_t n, const IntVec& shift, const Rational& c = 1);

  size_t ell() const { return ell_; }
  size_t n() const { return n_; }
  size_t nparams() const { return ell_ + n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const IntVec& shift, const RationalFunction& c);

  ShiftOperator operator-() const;
  friend ShiftOperator operator+(const ShiftOperator& a, const ShiftOperator& b);
  friend ShiftOperator operator-(const ShiftOperator& a, const ShiftOperator& b);
  friend ShiftOperator operator*(const ShiftOperator& a, const ShiftOperator& b);
  friend bool operator==(const ShiftOperator& a, const ShiftOperator& b);

  // sum_k c_k(p) F(p + k).
  cplx apply(const std::function<cplx(const std::vector<cplx>&)>& F, const std::vector<cplx>& p) const;

 private:
  size_t ell_ = 0;
  size_t n_ = 0;
  TermMap terms_;
};

std::string to_string(const ShiftOperator& op);
nlohmann::json to_json(const ShiftOperator& op);

// l operators 1 - sigma_{s_i} f_i(sigma_nu), then n operators
// sigma_{nu_j}^{-1} nu_j - sum_i s_i sigma_{s_i} (d f_i / d x_j)(sigma_nu).
std::vector<ShiftOperator> annihilator_generators(const IntegralSpec& spec);

// (g)_a = g (g+1) ... (g+a-1) for a > 0, 1 for a = 0 and
// 1 / ((g-1)(g-2) ... (g+a)) for a < 0. Throws PreconditionError on a zero
// factor in the negative case.
Rational pochhammer(const Rational& g, int a);
// Symbolic version; g is a polynomial in the parameter symbols.
RationalFunction pochhammer(const LaurentPolynomial& g, int a);

// c^{a,b} = (1-s)_{-a} (nu)_b / (1+nu-s)_{b-a}, the coefficient with
// ∫_0^1 x^{nu+b} (1-x)^{-s-a} dx/x = c^{a,b} ∫_0^1 x^nu (1-x)^{-s} dx/x.
// Throws PreconditionError at a pole.
Rational beta_reduction(int a, int b, const Rational& s, const Rational& nu);
// As a rational function of (s, nu).
RationalFunction beta_reduction(int a, int b);

struct ShiftReport {
  cplx estimate;
  double std_error = 0;
  double scale = 0;      // sum |c_k| |I_k|
  double threshold = 0;  // 10 x std_error + 1e-10 x scale
  bool passed = false;
  long samples = 0;
  uint64_t seed = 0;
  std::vector<std::pair<std::vector<ExactComplex>, cplx>> points;  // (s, nu) + shift, coefficient
};

// Evaluates sum_k c_k(s, nu) I(s + k_s, nu + k_nu) with common random
// numbers; passes when |estimate| <= threshold. Requires positive mode;
// throws PreconditionError naming the first shifted point outside the
// convergence domain.
ShiftReport verify_shift(const IntegralSpec& spec, const ShiftOperator& op, const McOptions& opt);

nlohmann::json to_json(const ShiftReport& r);

}  // namespace euler
