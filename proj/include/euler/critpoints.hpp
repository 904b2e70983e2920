// Critical points of log L = -sum s_i log f_i + sum nu_j log x_j.
#pragma once

#include "euler/homotopy.hpp"
#include "euler/spec.hpp"

namespace euler {

class NonGenericError : public NumericError {
 public:
  using NumericError::NumericError;
};

// p_j = nu'_j·prod - sum_i s_i·terms[j][i], where f~_i = x^{-m_i} f_i are the
// polynomial versions of the f_i (m_i the componentwise minimum exponent),
// prod = prod_i f~_i,
// terms[j][i] = x_j d_j f~_i · prod_{k != i} f~_k and nu' = nu - sum_i s_i m_i.
// The homogenized p_j in factored form, with (s, nu') supplied at evaluation;
// the p_j are linear in these parameters.
struct ParametricSystem {
  size_t n = 0, ell = 0;
  int degree = 0;          // sum_i deg f~_i
  PolySystem<cplx> atoms;  // f~_i, then x_j d_j f~_i, homogenized
  void eval(const std::vector<cplx>& X, const std::vector<cplx>& s, const std::vector<cplx>& nu,
            std::vector<cplx>& f, std::vector<std::vector<cplx>>& J) const;
};

struct CriticalSystem {
  IntegralSpec spec;
  std::vector<LaurentPolynomial> polys;  // f~_i
  std::vector<Exponent> shifts;          // m_i
  std::vector<ExactComplex> nu_eff;
  LaurentPolynomial product;
  std::vector<std::vector<LaurentPolynomial>> terms;
  LaurentPolynomial excluded_locus;  // x_1...x_n f~_1...f~_l

  template <class C>
  PolySystem<C> cleared() const;
  // The p_j homogenized to degree sum_i deg f~_i and evaluated in factored
  // form; the expanded polynomials lose digits to cancellation.
  HomogeneousSystem factored() const;
  ParametricSystem parametric() const;
  // g_j(x) = nu_j/x_j - sum_i s_i (d_j f_i)/f_i, evaluated with the original f_i.
  template <class C>
  std::vector<C> rational_residuals(const std::vector<C>& x) const;
  // Human-readable g_j and p_j.
  std::vector<std::string> rational_text() const;
  std::vector<std::string> cleared_text() const;
};

CriticalSystem critical_system(const IntegralSpec& spec);

struct PositivePoint {
  std::vector<double> a;
  double H = 0;      // toric Hessian determinant of -log L at a
  double log_L = 0;  // log L(a)
  int iterations = 0;
};
PositivePoint positive_critical_point(const IntegralSpec& spec);

struct CriticalPoint {
  std::vector<cplx> x;
  double residual = 0;  // max_j |g_j(x)| in 50-digit arithmetic
  cplx hessian;         // H_{-log L}(x)
};

struct CriticalPointSet {
  std::vector<CriticalPoint> points;
  size_t paths = 0;
  size_t failures = 0;     // paths that did not reach t = 1 and were not classified
  size_t at_infinity = 0;
  size_t excluded = 0;     // endpoints on the excluded locus
  std::vector<std::string> warnings;
  size_t count() const { return points.size(); }
};

struct SolveOptions {
  bool parallel = true;
  TrackSettings track;
  double residual_tol = 1e-8;
  double dedupe_tol = 1e-6;
  double excluded_tol = 1e-10;
  // Re-tracking rounds for paths that collide on one endpoint.
  int retrack_rounds = 2;
  // Full solves with fresh random homotopies while paths fail or collide.
  int attempts = 3;
  // Parameter-continuation rounds from auxiliary random instances.
  int completion_rounds = 3;
};

CriticalPointSet all_critical_points(const IntegralSpec& spec, uint64_t seed, const SolveOptions& opt = {});

struct ToricHessian {
  std::vector<std::vector<cplx>> M;  // x_j d_j (x_k d_k log L)
  cplx det_M;
  cplx H;  // det(-M)
  bool degenerate = false;
};
ToricHessian toric_hessian(const IntegralSpec& spec, const std::vector<cplx>& x);

// Stable critical-point count across random rational parameter draws.
struct EulerCount {
  long count = 0;
  std::vector<long> per_trial;
};
EulerCount euler_characteristic(const std::vector<LaurentPolynomial>& polys, int trials, uint64_t seed,
                                const SolveOptions& opt = {});
// Random generic rational parameters for the given polynomials (used by the count).
IntegralSpec random_generic_spec(const std::vector<LaurentPolynomial>& polys, uint64_t seed);

std::vector<double> moment_map(const std::vector<LaurentPolynomial>& polys, const std::vector<double>& s,
                               const std::vector<double>& x);
// Toric Jacobian x_j d mu_k / d x_j.
std::vector<std::vector<double>> moment_jacobian(const std::vector<LaurentPolynomial>& polys,
                                                 const std::vector<double>& s, const std::vector<double>& x);

nlohmann::json to_json(const CriticalPointSet& set);

}  // namespace euler
