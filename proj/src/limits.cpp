#include "euler/limits.hpp"
#include "euler/convergence.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

namespace euler {

using nlohmann::json;

LimitReport field_theory_limit(const IntegralSpec& spec, const LimitOptions& opt) {
  spec.validate();
  auto conv = check_convergence(spec);
  if (!conv.converges) throw PreconditionError("nu is not interior to P(s)");
  LimitReport rep;
  if (spec.positive_mode && spec.real_parameters()) {
    RatVec shift = spec.re_nu();
    for (auto& x : shift) x = -x;
    Polytope dual = polar_dual(translate(*conv.polytope, shift));
    rep.has_volume = true;
    rep.dual_volume_normalized = normalized_volume(dual);
    rep.dual_volume_euclidean = euclidean_volume(dual);
  }
  auto set = all_critical_points(spec, opt.seed, opt.solve);
  rep.critical_points = set.count();
  for (const auto& p : set.points) rep.critical_sum += 1.0 / p.hessian;
  rep.warnings = set.warnings;
  if (set.failures > 0) rep.reliable = false;
  if (opt.euler_trials > 0) {
    try {
      rep.euler_count = euler_characteristic(spec.polys, opt.euler_trials, opt.seed + 1, opt.solve).count;
      if (rep.euler_count != static_cast<long>(set.count())) {
        rep.reliable = false;
        rep.warnings.push_back("critical-point count " + std::to_string(set.count()) +
                               " differs from the generic count " + std::to_string(rep.euler_count));
      }
    } catch (const NumericError& e) {
      rep.reliable = false;
      rep.warnings.push_back(e.what());
    }
  }
  if (rep.has_volume) rep.agreement_gap = std::abs(to_double(rep.dual_volume_normalized) - rep.critical_sum.real());
  return rep;
}

HighEnergyReport high_energy_limit(const IntegralSpec& spec) {
  auto p = positive_critical_point(spec);
  HighEnergyReport r;
  r.a = p.a;
  r.log_L = p.log_L;
  r.H = p.H;
  r.prefactor = p.H > 0 ? cplx(1 / std::sqrt(p.H)) : cplx(0, -1 / std::sqrt(-p.H));
  return r;
}

LimitReport limits(const IntegralSpec& spec, const LimitOptions& opt) {
  LimitReport rep = field_theory_limit(spec, opt);
  bool positive_s = spec.real_parameters();
  for (const auto& z : spec.s) positive_s = positive_s && z.re > 0;
  if (spec.positive_mode && positive_s)
    rep.high_energy = high_energy_limit(spec);
  else
    rep.warnings.push_back("high-energy limit needs real positive s and positive coefficients");
  return rep;
}

std::vector<SweepRow> limit_sweep(const IntegralSpec& spec, const std::vector<Rational>& deltas,
                                  const McOptions& opt) {
  std::optional<HighEnergyReport> he;
  if (spec.positive_mode && spec.real_parameters()) he = high_energy_limit(spec);
  std::vector<SweepRow> rows;
  const double n = static_cast<double>(spec.n());
  for (const auto& d : deltas) {
    SweepRow row;
    row.delta = d;
    row.I = evaluate_Idelta(spec, d, opt);
    double dd = to_double(d);
    if (he) {
      double log_scale = -0.5 * n * std::log(2 * std::numbers::pi * dd) - he->log_L / dd + n * std::log(dd);
      double scale = std::exp(log_scale);
      row.saddle_ratio = scale * row.I.estimate.real();
      row.saddle_ratio_error = scale * row.I.std_error;
    } else {
      row.saddle_ratio = row.saddle_ratio_error = std::nan("");
    }
    rows.push_back(row);
  }
  return rows;
}

json to_json(const HighEnergyReport& r) {
  return {{"a", r.a},
          {"log_L", r.log_L},
          {"H", r.H},
          {"prefactor", r.prefactor.real()},
          {"prefactor_im", r.prefactor.imag()}};
}

json to_json(const LimitReport& r) {
  json j;
  if (r.has_volume) {
    j["dual_volume_normalized"] = to_string(r.dual_volume_normalized);
    j["dual_volume_euclidean"] = to_string(r.dual_volume_euclidean);
    j["agreement_gap"] = r.agreement_gap;
  }
  j["critical_sum"] = r.critical_sum.real();
  j["critical_sum_im"] = r.critical_sum.imag();
  j["critical_points"] = r.critical_points;
  if (r.euler_count >= 0) j["euler_count"] = r.euler_count;
  j["reliable"] = r.reliable;
  if (r.high_energy) j["high_energy"] = to_json(*r.high_energy);
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace euler
