#include "euler/critpoints.hpp"
#include "euler/convergence.hpp"
#include "euler/random.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

namespace euler {

using nlohmann::json;

CriticalSystem critical_system(const IntegralSpec& spec) {
  if (spec.vars.empty() || spec.polys.empty() || spec.s.size() != spec.polys.size() ||
      spec.nu.size() != spec.vars.size())
    throw PreconditionError("inconsistent spec shape");
  for (const auto& f : spec.polys)
    if (f.is_zero()) throw PreconditionError("zero polynomial in spec");
  CriticalSystem sys;
  sys.spec = spec;
  const size_t n = spec.n(), ell = spec.ell();
  sys.nu_eff = spec.nu;
  for (size_t i = 0; i < ell; ++i) {
    Exponent m = spec.polys[i].min_exponents();
    Exponent neg(m);
    for (auto& k : neg) k = -k;
    sys.shifts.push_back(m);
    sys.polys.push_back(spec.polys[i].shifted(neg));
    for (size_t j = 0; j < n; ++j) {
      sys.nu_eff[j].re -= spec.s[i].re * m[j];
      sys.nu_eff[j].im -= spec.s[i].im * m[j];
    }
  }
  sys.product = LaurentPolynomial::constant(n, 1);
  for (const auto& f : sys.polys) sys.product *= f;
  sys.terms.assign(n, {});
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < ell; ++i) {
      LaurentPolynomial t = theta(sys.polys[i], j);
      for (size_t k = 0; k < ell; ++k)
        if (k != i) t *= sys.polys[k];
      sys.terms[j].push_back(t);
    }
  Exponent ones(n, 1);
  sys.excluded_locus = sys.product.shifted(ones);
  return sys;
}

template <class C>
PolySystem<C> CriticalSystem::cleared() const {
  using S = Scalar<C>;
  PolySystem<C> P;
  P.nvars = spec.n();
  for (size_t j = 0; j < spec.n(); ++j) {
    std::map<Exponent, C> coeff;
    C nu = S::from(nu_eff[j]);
    for (const auto& [e, c] : product.terms()) coeff[e] += nu * S::from(c);
    for (size_t i = 0; i < spec.ell(); ++i) {
      C s = S::from(spec.s[i]);
      for (const auto& [e, c] : terms[j][i].terms()) coeff[e] -= s * S::from(c);
    }
    std::vector<typename PolySystem<C>::Term> eq;
    for (const auto& [e, c] : coeff)
      if (c != C(0)) eq.push_back({c, e});
    P.eqs.push_back(eq);
  }
  return P;
}

template <class C>
std::vector<C> CriticalSystem::rational_residuals(const std::vector<C>& x) const {
  using S = Scalar<C>;
  auto conv = [](const Rational& q) { return S::from(q); };
  const size_t n = spec.n();
  std::vector<C> g(n);
  for (size_t j = 0; j < n; ++j) g[j] = S::from(spec.nu[j]) / x[j];
  for (size_t i = 0; i < spec.ell(); ++i) {
    C f = CompiledPolynomial<C>(spec.polys[i], conv)(x);
    C s = S::from(spec.s[i]);
    for (size_t j = 0; j < n; ++j) g[j] -= s * CompiledPolynomial<C>(partial(spec.polys[i], j), conv)(x) / f;
  }
  return g;
}

template PolySystem<cplx> CriticalSystem::cleared<cplx>() const;
template PolySystem<cplx50> CriticalSystem::cleared<cplx50>() const;
template std::vector<cplx> CriticalSystem::rational_residuals<cplx>(const std::vector<cplx>&) const;
template std::vector<cplx50> CriticalSystem::rational_residuals<cplx50>(const std::vector<cplx50>&) const;

ParametricSystem CriticalSystem::parametric() const {
  const size_t n = spec.n(), ell = spec.ell();
  ParametricSystem out;
  out.n = n;
  out.ell = ell;
  // atoms: F_i = f~_i, then G_ij = x_j d_j f~_i, each homogenized to deg f~_i.
  out.atoms.nvars = n + 1;
  auto add = [&](const LaurentPolynomial& f, int d) {
    std::vector<PolySystem<cplx>::Term> eq;
    for (const auto& [e, c] : f.terms()) {
      Exponent h(n + 1, 0);
      int s = 0;
      for (size_t j = 0; j < n; ++j) {
        h[j + 1] = e[j];
        s += e[j];
      }
      h[0] = d - s;
      eq.push_back({to_double(c), h});
    }
    out.atoms.eqs.push_back(eq);
  };
  std::vector<int> deg;
  for (const auto& f : polys) {
    deg.push_back(f.total_degree());
    out.degree += deg.back();
    add(f, deg.back());
  }
  for (size_t i = 0; i < ell; ++i)
    for (size_t j = 0; j < n; ++j) add(theta(polys[i], j), deg[i]);
  return out;
}

void ParametricSystem::eval(const std::vector<cplx>& X, const std::vector<cplx>& s, const std::vector<cplx>& nu,
                            std::vector<cplx>& f, std::vector<std::vector<cplx>>& J) const {
  std::vector<cplx> a;
  std::vector<std::vector<cplx>> da;
  atoms.eval(X, a, &da);
  const size_t m = X.size();
  // P[i] = prod_{k != i} F_k, Q[i][k] = prod_{l != i, k} F_l.
  std::vector<cplx> P(ell, 1);
  std::vector<std::vector<cplx>> Q(ell, std::vector<cplx>(ell, 1));
  cplx all = 1;
  for (size_t k = 0; k < ell; ++k) all *= a[k];
  for (size_t i = 0; i < ell; ++i)
    for (size_t k = 0; k < ell; ++k) {
      if (k != i) P[i] *= a[k];
      for (size_t l = 0; l < ell; ++l)
        if (l != i && l != k) Q[i][k] *= a[l];
    }
  std::vector<cplx> dall(m, 0);
  for (size_t k = 0; k < ell; ++k)
    for (size_t c = 0; c < m; ++c) dall[c] += da[k][c] * P[k];
  f.assign(n, 0);
  J.assign(n, std::vector<cplx>(m, 0));
  for (size_t j = 0; j < n; ++j) {
    f[j] = nu[j] * all;
    for (size_t c = 0; c < m; ++c) J[j][c] = nu[j] * dall[c];
    for (size_t i = 0; i < ell; ++i) {
      const size_t g = ell + i * n + j;
      f[j] -= s[i] * a[g] * P[i];
      for (size_t c = 0; c < m; ++c) {
        cplx dP = 0;
        for (size_t k = 0; k < ell; ++k)
          if (k != i) dP += da[k][c] * Q[i][k];
        J[j][c] -= s[i] * (da[g][c] * P[i] + a[g] * dP);
      }
    }
  }
}

HomogeneousSystem CriticalSystem::factored() const {
  auto ps = std::make_shared<ParametricSystem>(parametric());
  std::vector<cplx> s, nu;
  for (const auto& z : spec.s) s.push_back(z.to_complex());
  for (const auto& z : nu_eff) nu.push_back(z.to_complex());
  HomogeneousSystem out;
  out.nvars = ps->n;
  out.degrees.assign(ps->n, ps->degree);
  out.eval = [ps, s, nu](const std::vector<cplx>& X, std::vector<cplx>& f, std::vector<std::vector<cplx>>& J) {
    ps->eval(X, s, nu, f, J);
  };
  return out;
}

namespace {

std::string coeff_text(const ExactComplex& z) {
  std::string t = to_string(z);
  return z.is_real() && z.re >= 0 ? t : "(" + t + ")";
}

}  // namespace

std::vector<std::string> CriticalSystem::rational_text() const {
  std::vector<std::string> out;
  for (size_t j = 0; j < spec.n(); ++j) {
    std::string g = coeff_text(spec.nu[j]) + "/" + spec.vars[j];
    for (size_t i = 0; i < spec.ell(); ++i) {
      auto d = partial(spec.polys[i], j);
      if (d.is_zero()) continue;
      g += " - " + coeff_text(spec.s[i]) + "*(" + to_string(d, spec.vars) + ")/(" +
           to_string(spec.polys[i], spec.vars) + ")";
    }
    out.push_back(g);
  }
  return out;
}

std::vector<std::string> CriticalSystem::cleared_text() const {
  std::vector<std::string> out;
  auto P = cleared<cplx>();
  // exact coefficients: rebuild with rationals when the parameters are real
  for (size_t j = 0; j < spec.n(); ++j) {
    if (spec.real_parameters()) {
      LaurentPolynomial p = nu_eff[j].re * product;
      for (size_t i = 0; i < spec.ell(); ++i) p = p - spec.s[i].re * terms[j][i];
      out.push_back(to_string(p, spec.vars));
    } else {
      std::string t;
      for (const auto& term : P.eqs[j]) {
        std::string mono;
        for (size_t k = 0; k < term.e.size(); ++k)
          if (term.e[k]) mono += "*" + spec.vars[k] + (term.e[k] > 1 ? "^" + std::to_string(term.e[k]) : "");
        t += (t.empty() ? "" : " + ") + std::string("(") + std::to_string(term.c.real()) + "+" +
             std::to_string(term.c.imag()) + "i)" + mono;
      }
      out.push_back(t);
    }
  }
  return out;
}

// ---------------------------------------------------------------- positive point

namespace {

struct LogPotential {
  const IntegralSpec& spec;
  std::vector<double> s, nu;
  std::vector<std::vector<std::pair<double, std::vector<double>>>> terms;  // (log c, alpha)

  explicit LogPotential(const IntegralSpec& sp) : spec(sp) {
    for (const auto& z : sp.s) s.push_back(to_double(z.re));
    for (const auto& z : sp.nu) nu.push_back(to_double(z.re));
    for (const auto& f : sp.polys) {
      std::vector<std::pair<double, std::vector<double>>> t;
      for (const auto& [e, c] : f.terms()) t.push_back({std::log(to_double(c)), {e.begin(), e.end()}});
      terms.push_back(t);
    }
  }

  // phi = log L(e^z), gradient and Hessian in z.
  double eval(const std::vector<double>& z, std::vector<double>* grad, Eigen::MatrixXd* hess) const {
    const size_t n = z.size();
    double phi = 0;
    for (size_t j = 0; j < n; ++j) phi += nu[j] * z[j];
    if (grad) *grad = nu;
    if (hess) hess->setZero(static_cast<long>(n), static_cast<long>(n));
    for (size_t i = 0; i < terms.size(); ++i) {
      std::vector<double> lw;
      double mx = -INFINITY;
      for (const auto& [lc, a] : terms[i]) {
        double v = lc;
        for (size_t j = 0; j < n; ++j) v += a[j] * z[j];
        lw.push_back(v);
        mx = std::max(mx, v);
      }
      double sum = 0;
      for (double v : lw) sum += std::exp(v - mx);
      double lse = mx + std::log(sum);
      phi -= s[i] * lse;
      if (!grad && !hess) continue;
      std::vector<double> mean(n, 0);
      std::vector<double> w(lw.size());
      for (size_t t = 0; t < lw.size(); ++t) {
        w[t] = std::exp(lw[t] - lse);
        for (size_t j = 0; j < n; ++j) mean[j] += w[t] * terms[i][t].second[j];
      }
      if (grad)
        for (size_t j = 0; j < n; ++j) (*grad)[j] -= s[i] * mean[j];
      if (hess)
        for (size_t t = 0; t < lw.size(); ++t)
          for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k)
              (*hess)(j, k) -= s[i] * w[t] * (terms[i][t].second[j] - mean[j]) * (terms[i][t].second[k] - mean[k]);
    }
    return phi;
  }
};

}  // namespace

PositivePoint positive_critical_point(const IntegralSpec& spec) {
  spec.validate();
  if (!spec.positive_mode) throw PreconditionError("positive critical point needs positive-coefficient mode");
  if (!spec.real_parameters()) throw PreconditionError("positive critical point needs real s and nu");
  auto rep = check_convergence(spec);
  if (!rep.converges) throw PreconditionError("nu is not interior to P(s) (or P(s) is degenerate)");
  LogPotential pot(spec);
  const size_t n = spec.n();
  std::vector<double> z(n, 0.0), grad, trial_grad;
  Eigen::MatrixXd hess;
  PositivePoint out;
  for (int it = 0; it <= 200; ++it) {
    double phi = pot.eval(z, &grad, &hess);
    double gmax = 0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    if (gmax < 1e-12) {
      out.iterations = it;
      out.log_L = phi;
      for (double v : z) out.a.push_back(std::exp(v));
      out.H = (-hess).determinant();
      return out;
    }
    Eigen::VectorXd g = Eigen::Map<Eigen::VectorXd>(grad.data(), static_cast<long>(n));
    Eigen::VectorXd dir = (-hess).ldlt().solve(g);
    double slope = g.dot(dir);
    double t = 1;
    if (gmax > 1e-6) {
      for (;;) {
        std::vector<double> zt(z);
        for (size_t j = 0; j < n; ++j) zt[j] += t * dir[static_cast<long>(j)];
        double pt = pot.eval(zt, nullptr, nullptr);
        if (std::isfinite(pt) && pt >= phi + 1e-4 * t * slope) break;
        t /= 2;
        if (t < 1e-12) break;
      }
    }
    for (size_t j = 0; j < n; ++j) z[j] += t * dir[static_cast<long>(j)];
  }
  throw NumericError("Newton iteration for the positive critical point did not converge in 200 steps");
}

// ---------------------------------------------------------------- toric Hessian

ToricHessian toric_hessian(const IntegralSpec& spec, const std::vector<cplx>& x) {
  const size_t n = spec.n();
  for (const auto& v : x)
    if (v == cplx(0)) throw PreconditionError("toric Hessian evaluated on a coordinate hyperplane");
  ToricHessian th;
  th.M.assign(n, std::vector<cplx>(n, 0));
  for (size_t i = 0; i < spec.ell(); ++i) {
    const auto& f = spec.polys[i];
    cplx fv = evaluate(f, x);
    if (std::abs(fv) == 0) throw PreconditionError("toric Hessian evaluated on the excluded locus");
    std::vector<cplx> t1(n);
    for (size_t j = 0; j < n; ++j) t1[j] = evaluate(theta(f, j), x);
    cplx s = spec.s[i].to_complex();
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        cplx t2 = evaluate(theta(theta(f, j), k), x);
        th.M[j][k] -= s * (t2 / fv - t1[j] * t1[k] / (fv * fv));
      }
  }
  th.det_M = determinant(th.M);
  auto negM = th.M;
  for (auto& row : negM)
    for (auto& v : row) v = -v;
  th.H = determinant(negM);
  // Relative to the Hadamard bound prod_j |row_j|.
  double bound = 1;
  for (const auto& row : th.M) {
    double r = 0;
    for (const auto& v : row) r += std::norm(v);
    bound *= std::sqrt(r);
  }
  th.degenerate = std::abs(th.H) <= 1e-12 * bound;
  return th;
}

// ---------------------------------------------------------------- all critical points

namespace {

// Newton on the factored system in the affine chart X0 = 1.
bool newton_refine_factored(const HomogeneousSystem& F, std::vector<cplx>& x, int iters, double tol) {
  const size_t n = x.size();
  std::vector<cplx> X(n + 1), f, dx;
  std::vector<std::vector<cplx>> J;
  for (int k = 0; k < iters; ++k) {
    X[0] = 1;
    std::copy(x.begin(), x.end(), X.begin() + 1);
    F.eval(X, f, J);
    std::vector<std::vector<cplx>> A(n, std::vector<cplx>(n));
    for (size_t r = 0; r < n; ++r) {
      for (size_t c = 0; c < n; ++c) A[r][c] = J[r][c + 1];
      f[r] = -f[r];
    }
    if (!solve_linear(A, f, dx)) return false;
    for (size_t i = 0; i < n; ++i) x[i] += dx[i];
    if (max_norm(dx) <= tol * (1 + max_norm(x))) return true;
  }
  return false;
}

template <class C>
bool newton_refine(const PolySystem<C>& F, std::vector<C>& x, int iters, double tol) {
  std::vector<C> f, dx;
  std::vector<std::vector<C>> J;
  for (int k = 0; k < iters; ++k) {
    F.eval(x, f, &J);
    for (auto& v : f) v = -v;
    if (!solve_linear(J, f, dx)) return false;
    for (size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    auto nd = max_norm(dx), nx = max_norm(x);
    if (nd <= tol * (1 + nx)) return true;
  }
  return false;
}

// Smallest |f~_i(x)| relative to the magnitude of its terms, and smallest |x_j|.
double excluded_measure(const CriticalSystem& sys, const std::vector<cplx>& x) {
  double m = INFINITY;
  for (const auto& v : x) m = std::min(m, std::abs(v) / (1 + std::abs(v)));
  for (const auto& f : sys.polys) {
    cplx val = 0;
    double mag = 0;
    for (const auto& [e, c] : f.terms()) {
      cplx t = to_double(c);
      for (size_t j = 0; j < e.size(); ++j) t *= std::pow(x[j], e[j]);
      val += t;
      mag += std::abs(t);
    }
    m = std::min(m, std::abs(val) / mag);
  }
  return m;
}

bool degenerate_parameters(const IntegralSpec& spec) {
  for (const auto& z : spec.s)
    if (!(z == ExactComplex())) return false;
  for (const auto& z : spec.nu)
    if (!(z == ExactComplex())) return false;
  return true;
}

}  // namespace

CriticalPointSet all_critical_points(const IntegralSpec& spec, uint64_t seed, const SolveOptions& opt) {
  CriticalSystem sys = critical_system(spec);
  if (degenerate_parameters(spec)) throw PreconditionError("s = nu = 0: the critical equations vanish identically");
  {
    std::vector<IntVec> cols;
    const size_t ell = spec.ell(), n = spec.n();
    for (size_t i = 0; i < ell; ++i)
      for (const auto& e : spec.polys[i].support()) {
        IntVec c(ell + n, 0);
        c[i] = 1;
        for (size_t j = 0; j < n; ++j) c[ell + j] = e[j];
        cols.push_back(c);
      }
    std::vector<RatVec> M;
    for (const auto& c : cols) M.push_back(to_rational(c));
    if (row_reduce(M).size() != ell + n)
      throw PreconditionError("the Minkowski sum of the Newton polytopes is not full-dimensional");
  }
  PolySystem<cplx> F = sys.cleared<cplx>();
  for (const auto& eq : F.eqs)
    if (eq.empty()) throw PreconditionError("a cleared critical equation vanishes identically");
  PolySystem<cplx50> F50 = sys.cleared<cplx50>();
  HomogeneousSystem target = sys.factored();

  enum class Kind { Failure, Infinity, Excluded, Inflated, Point };
  struct Triage {
    Kind kind = Kind::Failure;
    CriticalPoint cp;
  };
  auto classify = [&](const PathEnd& end) {
    Triage tr;
    double scale = max_norm(end.X);
    if (!std::isfinite(scale)) return tr;
    if (std::abs(end.X[0]) < 1e-8 * scale) {
      tr.kind = Kind::Infinity;
      return tr;
    }
    std::vector<cplx> x(end.X.begin() + 1, end.X.end());
    for (auto& v : x) v /= end.X[0];
    const std::vector<cplx> x_end = x;
    bool conv = newton_refine_factored(target, x, 20, 1e-13);
    if (!std::isfinite(max_norm(x))) return tr;
    if (excluded_measure(sys, x) < 1e-6) {
      tr.kind = Kind::Excluded;
      return tr;
    }
    if (!end.reached) {
      // A stalled path only counts if Newton confirms a root right at its end;
      // from far away it may land on a root that belongs to another path.
      double move = 0;
      for (size_t j = 0; j < x.size(); ++j) move = std::max(move, std::abs(x[j] - x_end[j]));
      if (!conv || move > 1e-3 * (1 + max_norm(x_end))) {
        // Stalls inside the endgame head for singular endpoints: infinity or the
        // excluded locus. Finite roots lost this way are recovered below.
        if (1 - end.t < opt.track.endgame_zone)
          tr.kind = std::abs(end.X[0]) < 1e-2 * scale ? Kind::Infinity : Kind::Excluded;
        return tr;
      }
    }
    std::vector<cplx50> x50;
    for (const auto& v : x) x50.push_back(lift(v));
    newton_refine(F50, x50, 50, 1e-45);
    auto g = sys.rational_residuals(x50);
    for (const auto& v : x50) tr.cp.x.push_back(Scalar<cplx50>::to_cplx(v));
    tr.cp.residual = max_norm(g).convert_to<double>();
    if (!(tr.cp.residual < opt.residual_tol)) {
      tr.kind = Kind::Inflated;
      return tr;
    }
    bool off_locus = true;
    for (const auto& v : tr.cp.x) off_locus = off_locus && std::abs(v) > opt.excluded_tol;
    for (const auto& f : spec.polys) off_locus = off_locus && std::abs(evaluate(f, tr.cp.x)) > opt.excluded_tol;
    tr.kind = off_locus ? Kind::Point : Kind::Excluded;
    return tr;
  };
  auto close = [&](const CriticalPoint& a, const CriticalPoint& b) {
    double d = 0;
    for (size_t j = 0; j < a.x.size(); ++j) d = std::max(d, std::abs(a.x[j] - b.x[j]));
    return d < opt.dedupe_tol;
  };
  auto run = [&](size_t count, auto&& body) {
    const long m = static_cast<long>(count);
    if (opt.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (long k = 0; k < m; ++k) body(static_cast<size_t>(k));
    } else {
      for (long k = 0; k < m; ++k) body(static_cast<size_t>(k));
    }
  };
  // Appends p unless already present; returns whether it was new.
  auto insert = [&](CriticalPointSet& out, CriticalPoint p) {
    for (const auto& q : out.points)
      if (close(p, q)) return false;
    auto th = toric_hessian(spec, p.x);
    // A multiple root shows up as a small Hessian together with only linear
    // convergence of the extended-precision Newton refinement.
    if (th.degenerate && p.residual > 1e-30)
      throw NonGenericError("degenerate critical point found; perturb (s, nu) to generic values");
    p.hessian = th.H;
    out.points.push_back(std::move(p));
    return true;
  };

  // Total-degree solve. Returns the set and the number of paths that ended on an
  // already found point.
  auto solve_once = [&](uint64_t path_seed) {
    TotalDegreeHomotopy hom(target, path_seed, opt.track);
    auto ends = opt.parallel ? hom.track_all_parallel() : hom.track_all_serial();
    std::vector<Triage> tri(ends.size());
    run(ends.size(), [&](size_t p) { tri[p] = classify(ends[p]); });

    // Two paths of a generic system never share an endpoint; a collision means
    // one of them jumped, so both are re-tracked with finer steps.
    TrackSettings fine = opt.track;
    for (int round = 0; round < opt.retrack_rounds; ++round) {
      std::vector<size_t> redo;
      for (size_t p = 0; p < tri.size(); ++p) {
        if (tri[p].kind != Kind::Point) continue;
        for (size_t q = 0; q < tri.size(); ++q)
          if (q != p && tri[q].kind == Kind::Point && close(tri[p].cp, tri[q].cp)) {
            redo.push_back(p);
            break;
          }
      }
      if (redo.empty()) break;
      fine.max_step /= 8;
      fine.corrector_tol /= 100;
      fine.max_steps *= 8;
      run(redo.size(), [&](size_t k) { tri[redo[k]] = classify(hom.track(redo[k], fine)); });
    }

    CriticalPointSet out;
    out.paths = ends.size();
    size_t inflated = 0, collisions = 0;
    for (auto& tr : tri) {
      switch (tr.kind) {
        case Kind::Failure: ++out.failures; break;
        case Kind::Infinity: ++out.at_infinity; break;
        case Kind::Excluded: ++out.excluded; break;
        case Kind::Inflated:
          ++out.failures;
          ++inflated;
          break;
        case Kind::Point:
          if (!insert(out, std::move(tr.cp))) ++collisions;
          break;
      }
    }
    if (out.failures > 0)
      out.warnings.push_back(std::to_string(out.failures) + " path(s) failed" +
                             (inflated ? " (" + std::to_string(inflated) + " with residual inflation)" : "") +
                             "; the parameters may be non-generic");
    if (collisions > 0)
      out.warnings.push_back(std::to_string(collisions) +
                             " path(s) ended on an already found point after re-tracking; a point may be missing");
    return std::make_pair(out, collisions);
  };

  // A path that stalls away from t = 1 passed close to a singularity of this
  // particular homotopy; a restart with fresh gamma and chart avoids it.
  CriticalPointSet best;
  size_t best_bad = std::numeric_limits<size_t>::max();
  for (int k = 0; k < std::max(1, opt.attempts); ++k) {
    uint64_t s = k == 0 ? seed : stream_seed(seed, 0x7265, static_cast<uint64_t>(k));
    auto [set, collisions] = solve_once(s);
    size_t bad = set.failures + collisions;
    if (bad < best_bad) {
      best = std::move(set);
      best_bad = bad;
    }
    if (bad == 0) break;
  }

  // Completion by parameter homotopy. Finite roots near a cluster of diverging
  // paths can stall with them in double precision. The critical points of an
  // auxiliary instance with random complex parameters are carried along a
  // random complex path in (s, nu') to the target; those paths stay in the
  // torus. Rounds stop once every auxiliary point lands on a known point and the
  // sizes match.
  const size_t n = spec.n(), ell = spec.ell();
  ParametricSystem ps = sys.parametric();
  std::vector<cplx> p1;
  for (const auto& z : spec.s) p1.push_back(z.to_complex());
  for (const auto& z : sys.nu_eff) p1.push_back(z.to_complex());
  for (int round = 0; round < opt.completion_rounds; ++round) {
    uint64_t aux_seed = stream_seed(seed, 0x636f6d70, static_cast<uint64_t>(round));
    IntegralSpec aux = random_generic_spec(spec.polys, aux_seed);
    std::mt19937_64 rng(stream_seed(aux_seed, 1));
    std::normal_distribution<double> gauss;
    for (auto& z : aux.s) z.im = rational_from_double(std::ldexp(std::round(std::ldexp(gauss(rng), 10)), -10));
    for (auto& z : aux.nu) z.im = rational_from_double(std::ldexp(std::round(std::ldexp(gauss(rng), 10)), -10));
    SolveOptions aux_opt = opt;
    aux_opt.completion_rounds = 0;
    CriticalPointSet from = all_critical_points(aux, aux_seed, aux_opt);
    CriticalSystem aux_sys = critical_system(aux);
    std::vector<cplx> p0, w;
    for (const auto& z : aux.s) p0.push_back(z.to_complex());
    for (const auto& z : aux_sys.nu_eff) p0.push_back(z.to_complex());
    for (size_t k = 0; k < p0.size(); ++k)
      w.push_back(cplx(gauss(rng), gauss(rng)) * (0.5 * (std::abs(p0[k]) + std::abs(p1[k]))));
    // Projective coordinates on a random chart a·X = 1 keep large roots well scaled.
    std::vector<cplx> chart(n + 1);
    for (auto& c : chart) c = cplx(gauss(rng), gauss(rng));
    HomotopyEval h = [&](const std::vector<cplx>& X, double t, std::vector<cplx>& H,
                         std::vector<std::vector<cplx>>& J, std::vector<cplx>& dHdt) {
      std::vector<cplx> pt(p0.size()), dp(p0.size());
      for (size_t k = 0; k < p0.size(); ++k) {
        pt[k] = (1 - t) * p0[k] + t * p1[k] + t * (1 - t) * w[k];
        dp[k] = p1[k] - p0[k] + (1 - 2 * t) * w[k];
      }
      const auto mid = static_cast<long>(ell);
      std::vector<std::vector<cplx>> unused;
      ps.eval(X, {pt.begin(), pt.begin() + mid}, {pt.begin() + mid, pt.end()}, H, J);
      // The equations are linear in the parameters.
      ps.eval(X, {dp.begin(), dp.begin() + mid}, {dp.begin() + mid, dp.end()}, dHdt, unused);
      cplx lin = -1.0;
      for (size_t c = 0; c <= n; ++c) lin += chart[c] * X[c];
      H.push_back(lin);
      J.push_back(chart);
      dHdt.push_back(0.0);
    };
    std::vector<Triage> tri(from.points.size());
    run(tri.size(), [&](size_t k) {
      std::vector<cplx> X(n + 1, 1.0);
      std::copy(from.points[k].x.begin(), from.points[k].x.end(), X.begin() + 1);
      cplx lin = 0;
      for (size_t c = 0; c <= n; ++c) lin += chart[c] * X[c];
      for (auto& v : X) v /= lin;
      tri[k] = classify(track_path(h, X, opt.track));
    });
    size_t carried = 0, added = 0;
    for (auto& tr : tri) {
      if (tr.kind != Kind::Point) continue;
      ++carried;
      if (insert(best, std::move(tr.cp))) ++added;
    }
    if (added == 0 && carried == from.count() && carried == best.count()) break;
    if (added > 0)
      best.warnings.push_back(std::to_string(added) + " point(s) recovered by parameter continuation");
  }

  std::sort(best.points.begin(), best.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    for (size_t j = 0; j < a.x.size(); ++j) {
      if (a.x[j].real() != b.x[j].real()) return a.x[j].real() < b.x[j].real();
      if (a.x[j].imag() != b.x[j].imag()) return a.x[j].imag() < b.x[j].imag();
    }
    return false;
  });
  return best;
}

IntegralSpec random_generic_spec(const std::vector<LaurentPolynomial>& polys, uint64_t seed) {
  if (polys.empty()) throw PreconditionError("no polynomials");
  std::mt19937_64 rng(stream_seed(seed, 0x6575));
  auto draw = [&]() {
    long den = 97 + static_cast<long>(rng() % 400);
    long num = static_cast<long>(den / 5) + static_cast<long>(rng() % static_cast<uint64_t>(3 * den));
    return ExactComplex(Rational(num, den));
  };
  IntegralSpec spec;
  spec.vars = default_vars(polys[0].nvars());
  spec.polys = polys;
  spec.positive_mode = false;
  for (size_t i = 0; i < polys.size(); ++i) spec.s.push_back(draw());
  for (size_t j = 0; j < spec.vars.size(); ++j) spec.nu.push_back(draw());
  return spec;
}

EulerCount euler_characteristic(const std::vector<LaurentPolynomial>& polys, int trials, uint64_t seed,
                                const SolveOptions& opt) {
  if (trials < 1) throw PreconditionError("at least one trial is required");
  EulerCount ec;
  for (int t = 0; t < trials; ++t) {
    uint64_t ts = stream_seed(seed, 0x6368, static_cast<uint64_t>(t));
    auto set = all_critical_points(random_generic_spec(polys, ts), ts, opt);
    ec.per_trial.push_back(static_cast<long>(set.count()));
  }
  for (long c : ec.per_trial)
    if (c != ec.per_trial.front()) {
      std::string all;
      for (long k : ec.per_trial) all += (all.empty() ? "" : ", ") + std::to_string(k);
      throw NumericError("critical-point counts disagree across trials: " + all);
    }
  ec.count = ec.per_trial.front();
  return ec;
}

std::vector<double> moment_map(const std::vector<LaurentPolynomial>& polys, const std::vector<double>& s,
                               const std::vector<double>& x) {
  for (double v : x)
    if (!(v > 0)) throw PreconditionError("moment map needs a positive point");
  for (double v : s)
    if (!(v > 0)) throw PreconditionError("moment map needs positive s");
  std::vector<cplx> xc(x.begin(), x.end());
  std::vector<double> mu(x.size(), 0);
  for (size_t i = 0; i < polys.size(); ++i) {
    double f = evaluate(polys[i], xc).real();
    for (size_t j = 0; j < x.size(); ++j) mu[j] += s[i] * evaluate(theta(polys[i], j), xc).real() / f;
  }
  return mu;
}

std::vector<std::vector<double>> moment_jacobian(const std::vector<LaurentPolynomial>& polys,
                                                 const std::vector<double>& s, const std::vector<double>& x) {
  IntegralSpec spec;
  spec.vars = default_vars(x.size());
  spec.polys = polys;
  for (double v : s) spec.s.push_back(ExactComplex(rational_from_double(v)));
  spec.nu.assign(x.size(), ExactComplex());
  auto th = toric_hessian(spec, std::vector<cplx>(x.begin(), x.end()));
  std::vector<std::vector<double>> J(x.size(), std::vector<double>(x.size()));
  for (size_t j = 0; j < x.size(); ++j)
    for (size_t k = 0; k < x.size(); ++k) J[j][k] = -th.M[j][k].real();
  return J;
}

json to_json(const CriticalPointSet& set) {
  json pts = json::array();
  for (const auto& p : set.points) {
    json x = json::array();
    for (const auto& v : p.x) x.push_back({v.real(), v.imag()});
    cplx inv = 1.0 / p.hessian;
    pts.push_back({{"x", x},
                   {"residual", p.residual},
                   {"hessian", {p.hessian.real(), p.hessian.imag()}},
                   {"inverse_hessian", {inv.real(), inv.imag()}}});
  }
  return {{"count", set.count()},  {"points", pts},       {"paths", set.paths},
          {"failures", set.failures}, {"at_infinity", set.at_infinity}, {"excluded", set.excluded},
          {"warnings", set.warnings}};
}

}  // namespace euler
