// The two delta-limits of I(delta) = delta^{-n} ∫ L^{1/delta} dx/x.
#pragma once

#include "euler/critpoints.hpp"
#include "euler/integrate.hpp"

#include <optional>

namespace euler {

struct HighEnergyReport {
  std::vector<double> a;  // positive critical point
  double log_L = 0;       // log L(a)
  double H = 0;           // toric Hessian of -log L at a
  // H^{-1/2} with (-r)^{1/2} = i r^{1/2}; real and positive when H > 0.
  cplx prefactor;
};

struct LimitReport {
  // Volume route: the polar dual of P(s) - nu, as n!·Euclidean and Euclidean volume.
  bool has_volume = false;
  Rational dual_volume_normalized;
  Rational dual_volume_euclidean;
  // Critical route: sum over all complex critical points of 1/H_{-log L}.
  cplx critical_sum;
  size_t critical_points = 0;
  long euler_count = -1;  // -1 when not computed
  bool reliable = true;
  double agreement_gap = 0;  // |normalized volume - Re critical_sum|
  std::optional<HighEnergyReport> high_energy;
  std::vector<std::string> warnings;
};

struct LimitOptions {
  uint64_t seed = 1;
  SolveOptions solve;
  // Cross-check the critical-point count against random generic draws.
  int euler_trials = 2;
};

// Volume and critical-sum routes for delta -> infinity.
LimitReport field_theory_limit(const IntegralSpec& spec, const LimitOptions& opt = {});
// Saddle point for delta -> 0: (2 pi delta)^{-n/2} L(a)^{-1/delta} ∫ L^{1/delta} dx/x -> H^{-1/2}.
HighEnergyReport high_energy_limit(const IntegralSpec& spec);
// Both, with the high-energy part only when its hypotheses hold.
LimitReport limits(const IntegralSpec& spec, const LimitOptions& opt = {});

struct SweepRow {
  Rational delta;
  QuadratureResult I;  // I(delta)
  // (2 pi delta)^{-n/2} L(a)^{-1/delta} delta^n I(delta); NaN when no positive point.
  double saddle_ratio = 0;
  double saddle_ratio_error = 0;
};
std::vector<SweepRow> limit_sweep(const IntegralSpec& spec, const std::vector<Rational>& deltas, const McOptions& opt);

nlohmann::json to_json(const HighEnergyReport& r);
nlohmann::json to_json(const LimitReport& r);

}  // namespace euler
