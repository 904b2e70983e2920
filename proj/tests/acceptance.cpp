// Acceptance report: one PASS/FAIL line per criterion, exit status 1 if any
// line fails. Tolerances are fixed here and must not be tuned per run.
#include "euler/convergence.hpp"
#include "euler/critpoints.hpp"
#include "euler/gkz.hpp"
#include "euler/integrate.hpp"
#include "euler/limits.hpp"
#include "euler/shiftops.hpp"
#include "test_util.hpp"

#include <Eigen/Eigenvalues>
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

using namespace euler;
using namespace testutil;

namespace {

constexpr double kPi2over6 = std::numbers::pi * std::numbers::pi / 6;
const double kSqrt5 = std::sqrt(5.0);

constexpr double kConvergenceSeconds = 1.0;
constexpr long kPentagonSamples = 10000000;
constexpr double kPentagonMcSeconds = 60.0;
constexpr double kMcSigmas = 3.0;
constexpr double kGaussLaguerreTol = 1e-6;
constexpr double kCriticalTol = 1e-8;
constexpr double kReciprocalSumTol = 1e-9;
constexpr double kBetaPointTol = 1e-12;
constexpr double kBetaLimitTol = 1e-9;
constexpr double kHighEnergyDelta = 0.01;
constexpr double kHighEnergyRelTol = 0.02;
constexpr int kEulerDraws = 5;
constexpr double kEulerSeconds = 300.0;
constexpr int kConeCount = 20;
constexpr int kConeSamples = 20000;
constexpr int kRouteSpecs = 10;
constexpr double kRouteTol = 1e-6;
constexpr int kMomentPoints = 100;
constexpr double kMomentTol = 1e-8;
constexpr long kShiftSamples = 400000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& title, const std::function<Verdict()>& body) {
  Verdict v;
  auto t0 = Clock::now();
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++failures;
  std::printf("%s %-5s %s [%s] (%.2f s)\n", v.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), v.detail.c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Critical-point x values sorted by first coordinate.
std::vector<std::vector<cplx>> sorted_points(const CriticalPointSet& set) {
  std::vector<std::vector<cplx>> xs;
  for (const auto& p : set.points) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end(), [](const auto& a, const auto& b) { return a[0].real() < b[0].real(); });
  return xs;
}

// Affine form c_nu nu + c_s s + c_0 of a Gamma argument r nu - w s~ with s~ = 1 + nu - s.
std::array<Rational, 3> unit_chart_argument(const GammaFactor& g) {
  Rational r = g.r[0], w = g.w[0];
  return {r - w, w, -w};
}

void criterion1() {
  report("1a", "pentagon convergence at nu=(1,1), divergence at nu=(2,2)", [] {
    auto t0 = Clock::now();
    bool ok = check_convergence(pentagon_spec(1, 1)).converges && !check_convergence(pentagon_spec(2, 2)).converges;
    double t = seconds_since(t0);
    return Verdict{ok && t < kConvergenceSeconds, fmt("%.4f s", t)};
  });
  report("1b", "pentagon integral pi^2/6 by Monte Carlo and Gauss-Laguerre", [] {
    McOptions opt;
    opt.samples = kPentagonSamples;
    opt.seed = 1;
    auto t0 = Clock::now();
    auto mc = evaluate(pentagon_spec(), opt);
    double t = seconds_since(t0);
    double mc_err = std::abs(mc.estimate.real() - kPi2over6);
    double gl_err = std::abs(evaluate_gauss_laguerre(pentagon_spec()).estimate.real() - kPi2over6);
    bool ok = mc_err <= kMcSigmas * mc.std_error && t < kPentagonMcSeconds && gl_err < kGaussLaguerreTol;
    return Verdict{ok, fmt("MC %.6f +- %.2e in %.1f s, |GL - pi^2/6| = %.1e", mc.estimate.real(), mc.std_error, t,
                           gl_err)};
  });
  auto set = std::make_shared<CriticalPointSet>();
  report("1c", "critical points ((+-sqrt5-1)/2, 1)", [set] {
    *set = all_critical_points(pentagon_spec(), 1);
    if (set->count() != 2) return Verdict{false, fmt("%zu points", set->count())};
    auto xs = sorted_points(*set);
    double err = 0;
    const double x1[] = {(-kSqrt5 - 1) / 2, (kSqrt5 - 1) / 2};
    for (int k = 0; k < 2; ++k) err = std::max({err, std::abs(xs[k][0] - x1[k]), std::abs(xs[k][1] - 1.0)});
    return Verdict{err < kCriticalTol, fmt("max error %.1e", err)};
  });
  report("1d", "Hessians (25+-11sqrt5)/2 and reciprocal sum 5", [set] {
    if (set->count() != 2) return Verdict{false, "no critical points"};
    std::vector<cplx> H;
    for (const auto& p : set->points) H.push_back(p.hessian);
    std::sort(H.begin(), H.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    double herr = std::max(std::abs(H[0] - (25 - 11 * kSqrt5) / 2), std::abs(H[1] - (25 + 11 * kSqrt5) / 2));
    double serr = std::abs(1.0 / H[0] + 1.0 / H[1] - 5.0);
    return Verdict{herr < kCriticalTol && serr < kReciprocalSumTol,
                   fmt("Hessian error %.1e, |sum 1/H - 5| = %.1e", herr, serr)};
  });
  report("1e", "dual polytope vertices and normalized volume 5", [] {
    auto spec = pentagon_spec();
    auto dual = polar_dual(translate(parametric_polytope(spec), {Rational(-1), Rational(-1)}));
    std::set<RatVec> got(dual.vertices().begin(), dual.vertices().end());
    std::set<RatVec> want = {{1, 1}, {1, 0}, {0, -1}, {-1, -1}, {0, 1}};
    Rational vol = normalized_volume(dual);
    return Verdict{got == want && vol == 5, "volume " + to_string(vol)};
  });
}

void criterion2() {
  report("2a", "beta Gamma skeleton {Gamma(nu), Gamma(1-s)}", [] {
    auto g = gamma_skeleton({parse("1+y", {"y"})});
    std::set<std::array<Rational, 3>> got;
    for (const auto& f : g.factors) got.insert(unit_chart_argument(f));
    std::set<std::array<Rational, 3>> want = {{Rational(1), Rational(0), Rational(0)},
                                              {Rational(0), Rational(-1), Rational(1)}};
    return Verdict{got == want && g.factors.size() == 2, gamma_text(g) + " with s~ = 1 + nu - s"};
  });
  report("2b", "positive critical point and Hessian at 10 rational points", [] {
    std::mt19937_64 rng(2024);
    double worst = 0;
    int done = 0;
    while (done < 10) {
      Rational nu = random_rational(rng, 1, 4), st = nu + random_rational(rng, 1, 4);
      if (nu <= 0 || st <= nu) continue;
      auto p = positive_critical_point(beta_spec(st, nu));
      double a = to_double(nu / (st - nu)), H = to_double(nu * (st - nu) / st);
      worst = std::max({worst, std::abs(p.a[0] - a) / std::max(1.0, a), std::abs(p.H - H) / std::max(1.0, H)});
      ++done;
    }
    return Verdict{worst < kBetaPointTol, fmt("max relative error %.1e", worst)};
  });
  report("2c", "field-theory limit s~/(nu(s~-nu)) by both routes", [] {
    std::mt19937_64 rng(2025);
    double worst = 0;
    bool exact = true;
    int done = 0;
    while (done < 10) {
      Rational st = random_rational(rng, 1, 6, 11), nu = random_rational(rng, 0, 1, 13) * st;
      if (nu <= 0 || nu >= st) continue;
      auto r = field_theory_limit(beta_spec(st, nu));
      Rational want = st / (nu * (st - nu));
      exact = exact && r.dual_volume_normalized == want;
      worst = std::max(worst, std::abs(r.critical_sum - to_double(want)) / to_double(want));
      ++done;
    }
    return Verdict{exact && worst < kBetaLimitTol, fmt("volume exact: %s, critical sum rel error %.1e",
                                                       exact ? "yes" : "no", worst)};
  });
  report("2d", "high-energy saddle ratio at delta = 0.01 within 2%", [] {
    double worst = 0;
    for (auto [st, nu] : std::vector<std::pair<int, int>>{{3, 1}, {5, 2}, {7, 3}}) {
      auto he = high_energy_limit(beta_spec(st, nu));
      double d = kHighEnergyDelta;
      double log_I = std::lgamma(nu / d) + std::lgamma((st - nu) / d) - std::lgamma(st / d);
      double ratio = std::exp(-0.5 * std::log(2 * std::numbers::pi * d) - he.log_L / d + log_I);
      double want = std::sqrt(double(st) / (nu * (st - nu)));
      worst = std::max(worst, std::abs(ratio / want - 1));
    }
    return Verdict{worst < kHighEnergyRelTol, fmt("max relative deviation %.2e", worst)};
  });
  report("2e", "beta_reduction(1,1) = -nu/s", [] {
    auto s = LaurentPolynomial::variable(2, 0), nu = LaurentPolynomial::variable(2, 1);
    auto c = beta_reduction(1, 1);
    bool ok = c == RationalFunction(-nu, s);
    return Verdict{ok, to_string(c, {"s", "nu"})};
  });
}

void criterion3() {
  report("3", "critical-point counts (m-3)! on M0,m, m = 4, 5, 6", [] {
    auto t0 = Clock::now();
    std::mt19937_64 rng(303);
    std::ostringstream counts;
    bool ok = true;
    const long expected[] = {1, 2, 6};
    for (int m = 4; m <= 6; ++m) {
      counts << "m=" << m << ":";
      for (int d = 0; d < kEulerDraws; ++d) {
        auto set = all_critical_points(moduli_spec(m, rng), 1000 + static_cast<uint64_t>(10 * m + d));
        counts << " " << set.count();
        ok = ok && static_cast<long>(set.count()) == expected[m - 4];
      }
      counts << "; ";
    }
    double t = seconds_since(t0);
    return Verdict{ok && t < kEulerSeconds, counts.str() + fmt("%.0f s", t)};
  });
}

void criterion4() {
  auto T = cayley(std::vector<std::vector<Exponent>>{
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}});
  auto sys = gkz_system(T);
  auto names = sys.z_names();
  report("4a", "triangle Cayley matrix", [&] {
    std::vector<std::vector<long>> rows(T.rows(), std::vector<long>(T.cols()));
    for (size_t r = 0; r < T.rows(); ++r)
      for (size_t c = 0; c < T.cols(); ++c) rows[r][c] = T.at(r, c);
    std::vector<std::vector<long>> want = {
        {1, 1, 1, 1, 1, 1}, {1, 0, 0, 0, 1, 1}, {0, 1, 0, 1, 0, 1}, {0, 0, 1, 1, 1, 0}};
    return Verdict{rows == want, fmt("%zux%zu", T.rows(), T.cols())};
  });
  report("4b", "toric binomials d1d4-d3d6, d2d5-d3d6", [&] {
    std::set<std::string> got;
    for (const auto& b : sys.binomials) got.insert(to_string(binomial_operator(b, sys.params.size()), names, sys.params, true));
    std::set<std::string> want = {"d[1]*d[4] - d[3]*d[6]", "d[2]*d[5] - d[3]*d[6]"};
    return Verdict{got == want && sys.binomials.size() == 2, fmt("%zu generators", sys.binomials.size())};
  });
  report("4c", "Euler operators", [&] {
    std::vector<std::string> got;
    for (const auto& op : sys.euler_ops) got.push_back(to_string(op, names, sys.params, true));
    std::vector<std::string> want = {"z1*d[1] + z2*d[2] + z3*d[3] + z4*d[4] + z5*d[5] + z6*d[6] + s",
                                     "z1*d[1] + z5*d[5] + z6*d[6] + nu1", "z2*d[2] + z4*d[4] + z6*d[6] + nu2",
                                     "z3*d[3] + z4*d[4] + z5*d[5] + nu3"};
    return Verdict{got == want, fmt("%zu operators", got.size())};
  });
  report("4d", "torus specialization gives P1, P2, P3", [&] {
    TorusRecipe recipe;
    recipe.fixed = {0, 1, 2};
    recipe.scales = {Rational(-1), Rational(-1), Rational(-1)};
    auto sp = specialize(sys, recipe);
    std::vector<std::string> got;
    for (const auto& op : sp.all()) got.push_back(to_string(op, sp.vars, sp.params, false));
    std::vector<std::string> want = {
        "t1*d[t1]^2 - t3*d[t3]^2 + (1 - s + nu2 + nu3)*d[t1] - (1 - s + nu1 + nu2)*d[t3]",
        "t2*d[t2]^2 - t3*d[t3]^2 + (1 - s + nu1 + nu3)*d[t2] - (1 - s + nu1 + nu2)*d[t3]",
        "t1*d[t1] + t2*d[t2] + t3*d[t3] + (-s + nu1 + nu2 + nu3)"};
    return Verdict{got == want, fmt("%zu operators", got.size())};
  });
}

void criterion5() {
  report("5a", "exponential cone integral = normalized volume on 20 simplicial cones", [] {
    std::mt19937_64 rng(505);
    std::uniform_int_distribution<int> c(-3, 3);
    int done = 0, ok = 0;
    double worst = 0;
    while (done < kConeCount) {
      size_t n = 2 + done % 2;
      std::vector<IntVec> rays(n, IntVec(n));
      for (auto& r : rays)
        for (auto& x : r) x = c(rng);
      std::vector<RatVec> M;
      for (const auto& r : rays) M.push_back(to_rational(r));
      if (determinant(M) == 0) continue;
      RatVec v(n);
      for (auto& x : v) x = random_rational(rng, -3, 3);
      bool neg = true;
      for (const auto& r : rays) neg = neg && dot(r, v) < 0;
      if (!neg) continue;
      std::vector<RatVec> corners = {RatVec(n, 0)};
      for (const auto& r : rays) {
        RatVec y = to_rational(r);
        Rational t = -1 / dot(r, v);
        for (auto& x : y) x *= t;
        corners.push_back(y);
      }
      double vol = to_double(normalized_volume(convex_hull(corners)));
      auto [mean, err] = cone_exp_integral(rays, v, rng, kConeSamples);
      double z = std::abs(mean - vol) / err;
      worst = std::max(worst, z);
      if (z <= kMcSigmas) ++ok;
      ++done;
    }
    return Verdict{ok == kConeCount, fmt("%d/%d within 3 sigma, worst %.2f sigma", ok, kConeCount, worst)};
  });
  report("5b", "volume and critical-sum routes agree on 10 random positive specs", [] {
    std::mt19937_64 rng(506);
    int done = 0;
    double worst = 0;
    while (done < kRouteSpecs) {
      auto spec = random_positive_spec(rng, 2, 2);
      std::vector<double> s;
      for (const auto& z : spec.s) s.push_back(to_double(z.re));
      auto mu = moment_map(spec.polys, s, random_positive_point(rng, 2));
      for (size_t j = 0; j < 2; ++j) spec.nu[j] = ExactComplex(Rational(std::lround(mu[j] * 1000), 1000));
      if (!check_convergence(spec).converges) continue;
      LimitOptions opt;
      opt.seed = static_cast<uint64_t>(done + 1);
      auto r = field_theory_limit(spec, opt);
      worst = std::max(worst, r.reliable ? r.agreement_gap : INFINITY);
      ++done;
    }
    return Verdict{worst < kRouteTol, fmt("max gap %.1e", worst)};
  });
  report("5c", "moment map fixed point and positive definite toric Jacobian at 100 points", [] {
    std::mt19937_64 rng(507);
    double worst = 0, min_eig = INFINITY;
    for (int k = 0; k < kMomentPoints; ++k) {
      size_t n = 1 + static_cast<size_t>(k % 2);
      auto spec = random_positive_spec(rng, n, 2);
      std::vector<double> s;
      for (const auto& z : spec.s) s.push_back(to_double(z.re));
      auto mu = moment_map(spec.polys, s, random_positive_point(rng, n));
      for (size_t j = 0; j < n; ++j) spec.nu[j] = ExactComplex(rational_from_double(mu[j]));
      auto a = positive_critical_point(spec).a;
      auto back = moment_map(spec.polys, s, a);
      for (size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(back[j] - to_double(spec.nu[j].re)));
      auto J = moment_jacobian(spec.polys, s, a);
      Eigen::MatrixXd A(n, n);
      for (size_t j = 0; j < n; ++j)
        for (size_t l = 0; l < n; ++l) A(long(j), long(l)) = J[j][l];
      min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A).eigenvalues().minCoeff());
    }
    return Verdict{worst < kMomentTol && min_eig > 0, fmt("max |mu(a) - nu| %.1e, min eigenvalue %.2e", worst, min_eig)};
  });
  report("5d", "shift annihilators on beta and M0,5 within 10x propagated error", [] {
    auto beta = beta_spec(Rational(5, 2), Rational(4, 3));
    auto m05 = pentagon_spec(Rational(5, 2), Rational(2));
    m05.s = {Rational(2), Rational(2), Rational(2)};
    McOptions opt;
    opt.samples = kShiftSamples;
    opt.seed = 9;
    int passed = 0, total = 0;
    double worst = 0;
    for (const auto* spec : {&beta, &m05}) {
      for (const auto& g : annihilator_generators(*spec)) {
        auto r = verify_shift(*spec, g, opt);
        ++total;
        if (r.passed) ++passed;
        worst = std::max(worst, std::abs(r.estimate) / r.threshold);
      }
    }
    return Verdict{passed == total && total == 7, fmt("%d/%d relations, max |S.I|/threshold %.2f", passed, total, worst)};
  });
  report("5e", "seed determinism and thread-count independence", [] {
    auto spec = pentagon_spec();
    McOptions opt;
    opt.samples = 200000;
    opt.seed = 42;
    int max_threads = std::max(2, omp_get_max_threads());
    omp_set_num_threads(1);
    auto a = evaluate(spec, opt);
    auto ca = all_critical_points(moduli_spec(5, *std::make_unique<std::mt19937_64>(5)), 3);
    omp_set_num_threads(max_threads);
    auto b = evaluate(spec, opt);
    auto cb = all_critical_points(moduli_spec(5, *std::make_unique<std::mt19937_64>(5)), 3);
    opt.parallel = false;
    auto c = evaluate(spec, opt);
    opt.parallel = true;
    opt.seed = 43;
    auto d = evaluate(spec, opt);
    bool same_points = ca.count() == cb.count();
    for (size_t k = 0; same_points && k < ca.count(); ++k) same_points = ca.points[k].x == cb.points[k].x;
    bool ok = a.estimate == b.estimate && a.std_error == b.std_error && a.estimate == c.estimate &&
              d.estimate != a.estimate && same_points;
    return Verdict{ok, fmt("1 vs %d threads and serial: identical; new seed differs by %.1e", max_threads,
                           std::abs(d.estimate - a.estimate))};
  });
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  std::printf("%s: %d failing criteria, %.1f s total\n", failures ? "FAIL" : "PASS", failures, seconds_since(t0));
  return failures ? 1 : 0;
}
