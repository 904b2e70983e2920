#include "euler/homotopy.hpp"
#include "euler/random.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace euler {

HomogeneousSystem homogenize(const PolySystem<cplx>& F) {
  auto deg = F.degrees();
  PolySystem<cplx> H;
  H.nvars = F.nvars + 1;
  for (size_t q = 0; q < F.eqs.size(); ++q) {
    std::vector<PolySystem<cplx>::Term> eq;
    for (const auto& t : F.eqs[q]) {
      Exponent e(H.nvars, 0);
      int s = 0;
      for (size_t j = 0; j < F.nvars; ++j) {
        e[j + 1] = t.e[j];
        s += t.e[j];
      }
      e[0] = deg[q] - s;
      eq.push_back({t.c, e});
    }
    H.eqs.push_back(eq);
  }
  HomogeneousSystem out;
  out.nvars = F.nvars;
  out.degrees = deg;
  out.eval = [H](const std::vector<cplx>& X, std::vector<cplx>& f, std::vector<std::vector<cplx>>& J) {
    H.eval(X, f, &J);
  };
  return out;
}

TotalDegreeHomotopy::TotalDegreeHomotopy(HomogeneousSystem target, uint64_t seed, TrackSettings settings)
    : target_(std::move(target)), settings_(settings) {
  n_ = target_.nvars;
  if (target_.degrees.size() != n_) throw std::invalid_argument("square system required");
  degrees_ = target_.degrees;
  for (int d : degrees_) {
    if (d < 1) throw std::invalid_argument("equation of degree zero");
    paths_ *= static_cast<size_t>(d);
  }
  std::mt19937_64 rng(stream_seed(seed, 0x67616d6d61ULL));
  double theta = 2 * std::numbers::pi * uniform_open0(rng);
  gamma_ = std::polar(1.0, theta);
  chart_.resize(n_ + 1);
  for (auto& a : chart_) {
    double u1 = uniform_open0(rng), u2 = uniform_open0(rng);
    // Box-Muller keeps the chart reproducible across standard libraries.
    double r = std::sqrt(-2 * std::log(u1));
    a = cplx(r * std::cos(2 * std::numbers::pi * u2), r * std::sin(2 * std::numbers::pi * u2));
  }
}

std::vector<cplx> TotalDegreeHomotopy::start_point(size_t path) const {
  std::vector<cplx> X(n_ + 1);
  X[0] = 1;
  size_t rest = path;
  for (size_t j = 0; j < n_; ++j) {
    size_t d = static_cast<size_t>(degrees_[j]);
    size_t k = rest % d;
    rest /= d;
    X[j + 1] = std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d));
  }
  cplx lin = 0;
  for (size_t j = 0; j <= n_; ++j) lin += chart_[j] * X[j];
  for (auto& x : X) x /= lin;
  return X;
}

void TotalDegreeHomotopy::eval_h(const std::vector<cplx>& X, double t, std::vector<cplx>& H,
                                 std::vector<std::vector<cplx>>& J, std::vector<cplx>& dHdt) const {
  std::vector<cplx> F;
  std::vector<std::vector<cplx>> JF;
  target_.eval(X, F, JF);
  const size_t m = n_ + 1;
  H.assign(m, 0);
  dHdt.assign(m, 0);
  J.assign(m, std::vector<cplx>(m, 0));
  const cplx a = (1 - t) * gamma_;
  for (size_t q = 0; q < n_; ++q) {
    int d = degrees_[q];
    cplx xq = std::pow(X[q + 1], d), x0 = std::pow(X[0], d);
    cplx G = xq - x0;
    H[q] = a * G + t * F[q];
    dHdt[q] = F[q] - gamma_ * G;
    for (size_t j = 0; j < m; ++j) J[q][j] = t * JF[q][j];
    J[q][q + 1] += a * cplx(d) * std::pow(X[q + 1], d - 1);
    J[q][0] -= a * cplx(d) * std::pow(X[0], d - 1);
  }
  cplx lin = -1;
  for (size_t j = 0; j < m; ++j) {
    lin += chart_[j] * X[j];
    J[n_][j] = chart_[j];
  }
  H[n_] = lin;
  dHdt[n_] = 0;
}

PathEnd TotalDegreeHomotopy::track(size_t path) const { return track(path, settings_); }

PathEnd track_path(const HomotopyEval& eval_h, std::vector<cplx> X, const TrackSettings& settings) {
  PathEnd out;
  std::vector<cplx> H, dHdt, Xdot, delta;
  std::vector<std::vector<cplx>> J;
  double t = 0, h = settings.max_step / 4;
  while (t < 1) {
    double floor = settings.min_step * std::min(1.0, (1 - t) / settings.endgame_zone);
    if (h < floor || out.steps + out.rejected >= settings.max_steps) break;
    double step = std::min(h, 1 - t);
    eval_h(X, t, H, J, dHdt);
    std::vector<cplx> rhs(dHdt.size());
    for (size_t i = 0; i < rhs.size(); ++i) rhs[i] = -dHdt[i];
    if (!solve_linear(J, rhs, Xdot)) {
      h /= 2;
      continue;
    }
    std::vector<cplx> Xp(X);
    for (size_t i = 0; i < X.size(); ++i) Xp[i] += step * Xdot[i];
    double tn = (step == 1 - t) ? 1.0 : t + step;
    bool ok = false;
    double prev = 0;
    for (int k = 0; k < settings.max_corrector; ++k) {
      eval_h(Xp, tn, H, J, dHdt);
      for (auto& v : H) v = -v;
      if (!solve_linear(J, H, delta)) break;
      double nd = max_norm(delta);
      if (!std::isfinite(nd)) break;
      for (size_t i = 0; i < Xp.size(); ++i) Xp[i] += delta[i];
      double scale = 1 + max_norm(Xp);
      if (k > 0 && nd > 0.5 * prev) break;
      prev = nd;
      if (nd < settings.corrector_tol * scale) {
        ok = true;
        break;
      }
    }
    if (ok) {
      X = Xp;
      t = tn;
      ++out.steps;
      h = std::min(2 * h, settings.max_step);
    } else {
      h /= 2;
      ++out.rejected;
    }
  }
  out.X = X;
  out.t = t;
  out.reached = t >= 1;
  return out;
}

PathEnd TotalDegreeHomotopy::track(size_t path, const TrackSettings& settings) const {
  return track_path(
      [this](const std::vector<cplx>& X, double t, std::vector<cplx>& H, std::vector<std::vector<cplx>>& J,
             std::vector<cplx>& dHdt) { eval_h(X, t, H, J, dHdt); },
      start_point(path), settings);
}

std::vector<PathEnd> TotalDegreeHomotopy::track_all_serial() const {
  std::vector<PathEnd> out(paths_);
  for (size_t p = 0; p < paths_; ++p) out[p] = track(p);
  return out;
}

std::vector<PathEnd> TotalDegreeHomotopy::track_all_parallel() const {
  std::vector<PathEnd> out(paths_);
  const long count = static_cast<long>(paths_);
#pragma omp parallel for schedule(dynamic, 1)
  for (long p = 0; p < count; ++p) out[static_cast<size_t>(p)] = track(static_cast<size_t>(p));
  return out;
}

}  // namespace euler
