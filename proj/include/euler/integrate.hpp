// Sector-decomposed evaluation of the integral over the positive orthant in
// logarithmic coordinates x = exp(y).
#pragma once

#include "euler/spec.hpp"

#include <cstdint>

namespace euler {

// One simplicial piece of the cone C_v of a vertex v of P(Re s). Points of the
// sector are y = -A z with z >= 0, where the columns of A are the rays.
struct Sector {
  size_t vertex = 0;                // index into P(Re s).vertices()
  RatVec v;
  std::vector<IntVec> rays;
  Rational abs_det;
  std::vector<Exponent> summands;   // vertex of Delta(f_i) with v = sum s_i v_i
  RatVec rates;                     // r_k·(Re nu - v) > 0
};

std::vector<Sector> sector_decompose(const IntegralSpec& spec);

// Exact envelope integral sum over sectors of |det A| / prod_k rates_k, per
// vertex; it equals the normalized volume of the dual cell of v about nu.
std::vector<Rational> envelope_volumes(const IntegralSpec& spec);

struct SectorResult {
  size_t sector = 0;
  size_t vertex = 0;
  cplx estimate;
  double std_error = 0;     // real part
  double std_error_im = 0;  // imaginary part
  long samples = 0;
  // Pointwise bounds of the weight for real s: the estimate lies in [lower, upper].
  bool has_bounds = false;
  double lower = 0;
  double upper = 0;
};

struct QuadratureResult {
  cplx estimate;
  double std_error = 0;
  double std_error_im = 0;
  long samples = 0;
  uint64_t seed = 0;
  std::string backend;  // "monte-carlo" or "gauss-laguerre"
  std::vector<SectorResult> sectors;
};

inline constexpr long kBatchSize = 4096;

struct McOptions {
  long samples = 1000000;
  uint64_t seed = 1;
  bool parallel = true;
};

// Importance-sampled Monte Carlo with an exponential density per sector
// coordinate. Serial and parallel runs give bit-identical results.
QuadratureResult evaluate(const IntegralSpec& spec, const McOptions& opt);

// sum_m c_m I(spec_m) with common random numbers; all specs share their
// polynomials. Rates are the per-ray minimum over the specs.
QuadratureResult evaluate_combination(const std::vector<std::pair<cplx, IntegralSpec>>& terms,
                                      const McOptions& opt);

// Tensor Gauss-Laguerre quadrature (n <= 2) on the same sectors.
QuadratureResult evaluate_gauss_laguerre(const IntegralSpec& spec, int nodes = 64);

// I(delta) = delta^{-n} ∫ L^{1/delta} dx/x.
QuadratureResult evaluate_Idelta(const IntegralSpec& spec, const Rational& delta, const McOptions& opt);
// Unscaled ∫ L^{1/delta} dx/x = delta^n I(delta).
QuadratureResult evaluate_powered(const IntegralSpec& spec, const Rational& delta, const McOptions& opt);

// Gauss-Laguerre nodes and weights for weight e^{-x}.
void gauss_laguerre(int n, std::vector<double>& nodes, std::vector<double>& weights);

nlohmann::json to_json(const Sector& s);
nlohmann::json to_json(const QuadratureResult& r);

}  // namespace euler
