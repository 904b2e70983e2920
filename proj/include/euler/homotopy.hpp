// Polynomial systems and a total-degree homotopy path tracker.
#pragma once

#include "euler/numeric.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace euler {

template <class C>
struct PolySystem {
  struct Term {
    C c;
    Exponent e;  // nonnegative
  };
  size_t nvars = 0;
  std::vector<std::vector<Term>> eqs;

  std::vector<int> degrees() const {
    std::vector<int> d;
    for (const auto& eq : eqs) {
      int m = 0;
      for (const auto& t : eq) {
        int s = 0;
        for (int k : t.e) s += k;
        m = std::max(m, s);
      }
      d.push_back(m);
    }
    return d;
  }

  // Values and (optionally) the Jacobian at x.
  void eval(const std::vector<C>& x, std::vector<C>& f, std::vector<std::vector<C>>* J) const {
    const size_t n = nvars;
    int maxdeg = 0;
    for (const auto& eq : eqs)
      for (const auto& t : eq)
        for (int k : t.e) maxdeg = std::max(maxdeg, k);
    std::vector<std::vector<C>> pw(n, std::vector<C>(maxdeg + 1, C(1)));
    for (size_t j = 0; j < n; ++j)
      for (int k = 1; k <= maxdeg; ++k) pw[j][k] = pw[j][k - 1] * x[j];
    f.assign(eqs.size(), C(0));
    if (J) J->assign(eqs.size(), std::vector<C>(n, C(0)));
    for (size_t q = 0; q < eqs.size(); ++q)
      for (const auto& t : eqs[q]) {
        C m = t.c;
        for (size_t j = 0; j < n; ++j) m *= pw[j][t.e[j]];
        f[q] += m;
        if (!J) continue;
        for (size_t j = 0; j < n; ++j) {
          if (t.e[j] == 0) continue;
          C d = t.c * C(t.e[j]);
          for (size_t k = 0; k < n; ++k) d *= pw[k][k == j ? t.e[k] - 1 : t.e[k]];
          (*J)[q][j] += d;
        }
      }
  }
};

// A square system of homogeneous equations in X = (X0, X1, ..., Xn) given by
// its degrees and an evaluator for values and the (n × (n+1)) Jacobian.
struct HomogeneousSystem {
  size_t nvars = 0;  // n
  std::vector<int> degrees;
  std::function<void(const std::vector<cplx>& X, std::vector<cplx>& f, std::vector<std::vector<cplx>>& J)> eval;
};

// Homogenizes each equation to its own total degree.
HomogeneousSystem homogenize(const PolySystem<cplx>& F);

struct TrackSettings {
  double min_step = 1e-6;
  double max_step = 0.1;
  int max_corrector = 3;
  double corrector_tol = 1e-9;
  // Below 1 - t = endgame_zone the step floor shrinks with 1 - t, so paths to
  // ill-conditioned endpoints can approach t = 1; max_steps bounds the work.
  double endgame_zone = 1e-4;
  int max_steps = 1000;
};

struct PathEnd {
  std::vector<cplx> X;  // projective coordinates (X0, X1, ..., Xn) on the chart
  double t = 0;
  int steps = 0;
  int rejected = 0;
  bool reached = false;  // t == 1 reached with converged corrector
};

// H(X, t) with its square Jacobian in X and dH/dt.
using HomotopyEval = std::function<void(const std::vector<cplx>& X, double t, std::vector<cplx>& H,
                                        std::vector<std::vector<cplx>>& J, std::vector<cplx>& dHdt)>;

// Predictor-corrector continuation of H(X, t) = 0 from t = 0 to t = 1.
PathEnd track_path(const HomotopyEval& h, std::vector<cplx> X, const TrackSettings& settings);

// Tracks the straight-line homotopy (1-t)·gamma·G + t·F from the start system
// G_j = X_j^{d_j} - X_0^{d_j} in projective space on a random affine chart.
class TotalDegreeHomotopy {
 public:
  TotalDegreeHomotopy(HomogeneousSystem target, uint64_t seed, TrackSettings settings = {});
  TotalDegreeHomotopy(const PolySystem<cplx>& target, uint64_t seed, TrackSettings settings = {})
      : TotalDegreeHomotopy(homogenize(target), seed, settings) {}

  size_t path_count() const { return paths_; }
  cplx gamma() const { return gamma_; }
  const std::vector<cplx>& chart() const { return chart_; }
  PathEnd track(size_t path) const;
  // Same path with different step control, e.g. to re-track after path jumping.
  PathEnd track(size_t path, const TrackSettings& settings) const;
  // Reference implementation and its OpenMP counterpart; identical output.
  std::vector<PathEnd> track_all_serial() const;
  std::vector<PathEnd> track_all_parallel() const;

 private:
  void eval_h(const std::vector<cplx>& X, double t, std::vector<cplx>& H, std::vector<std::vector<cplx>>& J,
              std::vector<cplx>& dHdt) const;
  std::vector<cplx> start_point(size_t path) const;

  HomogeneousSystem target_;
  std::vector<int> degrees_;
  size_t n_ = 0;
  size_t paths_ = 1;
  cplx gamma_;
  std::vector<cplx> chart_;
  TrackSettings settings_;
};

}  // namespace euler
