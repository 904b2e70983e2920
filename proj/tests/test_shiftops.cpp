#include "euler/convergence.hpp"
#include "euler/shiftops.hpp"
#include "test_util.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <algorithm>

using namespace euler;
using namespace testutil;

namespace {

// Beta on (0,1): ratio I(s + a, nu + b) / I(s, nu) by single steps, in the
// order given (+-1 in the s slot = 0, nu slot = 1).
//   sigma_nu:      nu / (1 + nu - s)        sigma_nu^{-1}: (nu - s) / (nu - 1)
//   sigma_s^{-1}:  (1 - s) / (1 + nu - s)   sigma_s:       (s - nu) / s
Rational walk(Rational s, Rational nu, const std::vector<std::pair<int, int>>& steps) {
  Rational r = 1;
  for (auto [slot, dir] : steps) {
    if (slot == 1 && dir > 0) r *= nu / (1 + nu - s), nu += 1;
    else if (slot == 1) r *= (nu - s) / (nu - 1), nu -= 1;
    else if (dir < 0) r *= (1 - s) / (1 + nu - s), s -= 1;
    else r *= (s - nu) / s, s += 1;
  }
  return r;
}

std::vector<std::pair<int, int>> steps_for(int a, int b) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < std::abs(a); ++i) out.push_back({0, a > 0 ? 1 : -1});
  for (int i = 0; i < std::abs(b); ++i) out.push_back({1, b > 0 ? 1 : -1});
  return out;
}

IntegralSpec one_minus_x(Rational s, Rational nu) {
  IntegralSpec spec;
  spec.vars = {"x"};
  spec.polys = {parse("1-x", spec.vars)};
  spec.s = {s};
  spec.nu = {nu};
  spec.positive_mode = false;
  return spec;
}

// ∫_0^1 x^nu (1-x)^{-s} dx/x through x = y/(1+y): f = 1 + y, s~ = 1 + nu - s.
double unit_beta(const Rational& s, const Rational& nu) {
  return evaluate_gauss_laguerre(beta_spec(1 + nu - s, nu), 128).estimate.real();
}

RationalFunction param(size_t P, size_t j) { return RationalFunction(LaurentPolynomial::variable(P, j)); }

}  // namespace

TEST_CASE("Pochhammer symbols") {
  CHECK(pochhammer(Rational(7, 3), 0) == 1);
  CHECK(pochhammer(Rational(3), 2) == 12);
  CHECK(pochhammer(Rational(3), -1) == Rational(1, 2));
  CHECK(pochhammer(Rational(3), -1) * pochhammer(Rational(2), 1) == 1);
  CHECK_THROWS_AS(pochhammer(Rational(2), -3), PreconditionError);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    Rational g = random_rational(rng, -4, 4, 13);
    if (is_integer(g)) g += Rational(1, 2);
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) CHECK(pochhammer(g, a) * pochhammer(g + a, b) == pochhammer(g, a + b));
  }

  auto x = LaurentPolynomial::variable(1, 0);
  auto sym = pochhammer(x, -2);
  CHECK(sym.evaluate(RatVec{Rational(7, 2)}) == pochhammer(Rational(7, 2), -2));
}

TEST_CASE("beta reduction coefficients") {
  // [dx/(1-x)] = -nu/s [dx/x].
  RationalFunction expect = -(param(2, 1) / param(2, 0));
  CHECK(beta_reduction(1, 1) == expect);
  CHECK(beta_reduction(0, 0) == RationalFunction::constant(2, 1));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    Rational s = random_rational(rng, -3, 3, 11), nu = random_rational(rng, -3, 3, 11);
    if (is_integer(s) || is_integer(nu) || is_integer(nu - s)) continue;
    CHECK(beta_reduction(1, 1, s, nu) == -nu / s);
  }
  Rational s(1, 2), nu(1, 3);
  CHECK(beta_reduction(2, 1, s, nu) == walk(s, nu, steps_for(2, 1)));
  CHECK_THROWS_AS(beta_reduction(1, 0, Rational(0), Rational(1, 3)), PreconditionError);
}

TEST_CASE("contiguity closure: every walk order gives the product formula") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    Rational s = random_rational(rng, -2, 2, 17) + Rational(1, 101);
    Rational nu = random_rational(rng, -2, 2, 19) + Rational(1, 103);
    for (int a = -2; a <= 2; ++a) {
      for (int b = -2; b <= 2; ++b) {
        Rational formula = beta_reduction(a, b, s, nu);
        CHECK(beta_reduction(a, b).evaluate(RatVec{s, nu}) == formula);
        auto steps = steps_for(a, b);
        for (int perm = 0; perm < 4; ++perm) {
          std::shuffle(steps.begin(), steps.end(), rng);
          CHECK(walk(s, nu, steps) == formula);
        }
      }
    }
  }
}

TEST_CASE("master-integral identity by quadrature") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    // Every shifted exponent stays at least 1 away from the convergence boundary.
    Rational s = -2 - random_rational(rng, 0, 1, 7) / 2;
    Rational nu = 3 + random_rational(rng, 0, 1, 7) / 2;
    double base = unit_beta(s, nu);
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {-1, 2}, {1, -2}, {0, 1}}) {
      double lhs = unit_beta(s + a, nu + b);
      double rhs = to_double(beta_reduction(a, b, s, nu)) * base;
      CAPTURE(a);
      CAPTURE(b);
      CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(rhs));
    }
  }
}

TEST_CASE("annihilator generators") {
  auto beta = annihilator_generators(one_minus_x(Rational(1, 2), Rational(1, 3)));
  REQUIRE(beta.size() == 2);
  // S1 = 1 - sigma_s (1 - sigma_nu).
  auto one = ShiftOperator::constant(1, 1, Rational(1));
  auto ss = ShiftOperator::monomial(1, 1, {1, 0});
  auto sn = ShiftOperator::monomial(1, 1, {0, 1});
  CHECK(beta[0] == one - ss * (one - sn));
  CHECK(to_string(beta[0]) == "1 - sigma_s[1] + sigma_s[1]*sigma_nu[1]");
  // sigma_nu^{-1} S2 with S2 = nu + s sigma_nu sigma_s.
  auto S2 = ShiftOperator::constant(1, 1, param(2, 1)) + ShiftOperator::constant(1, 1, param(2, 0)) * sn * ss;
  CHECK(beta[1] == ShiftOperator::monomial(1, 1, {0, -1}) * S2);
  CHECK(to_string(beta[1]) == "(-1 + nu)*sigma_nu[1]^-1 + (s)*sigma_s[1]");

  auto m05 = annihilator_generators(pentagon_spec());
  CHECK(m05.size() == 5);
  // (J1) for f2 = 1 + x1 + x2.
  auto s2 = ShiftOperator::monomial(3, 2, {0, 1, 0, 0, 0});
  auto J1 = ShiftOperator::constant(3, 2, Rational(1)) - s2 * (ShiftOperator::constant(3, 2, Rational(1)) +
                                                               ShiftOperator::monomial(3, 2, {0, 0, 0, 1, 0}) +
                                                               ShiftOperator::monomial(3, 2, {0, 0, 0, 0, 1}));
  CHECK(m05[1] == J1);
  // (J2) for x2: d/dx2 of (1+x1, 1+x1+x2, x1+x2) is (0, 1, 1).
  auto J2 = ShiftOperator::monomial(3, 2, {0, 0, 0, 0, -1}) * ShiftOperator::constant(3, 2, param(5, 4)) -
            ShiftOperator::constant(3, 2, param(5, 1)) * s2 -
            ShiftOperator::constant(3, 2, param(5, 2)) * ShiftOperator::monomial(3, 2, {0, 0, 1, 0, 0});
  CHECK(m05[4] == J2);

  IntegralSpec c;
  c.vars = {"x"};
  c.polys = {parse("3", c.vars)};
  c.s = {Rational(1)};
  c.nu = {Rational(1)};
  CHECK(to_string(annihilator_generators(c)[0]) == "1 - 3*sigma_s[1]");
}

TEST_CASE("sigma g = g(shifted) sigma") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto num = random_poly(rng, 3, 3, 0, 2);
    auto den = random_poly(rng, 3, 2, 0, 1);
    RationalFunction g(num, den);
    auto G = ShiftOperator::constant(1, 2, g);
    for (size_t j = 0; j < 3; ++j) {
      IntVec e(3, 0);
      e[j] = 1;
      auto sigma = ShiftOperator::monomial(1, 2, e);
      CHECK(sigma * G == ShiftOperator::constant(1, 2, g.shifted(j, 1)) * sigma);
      // Applied to a test function the two orders differ by g(p + e) - g(p).
      auto F = [](const std::vector<cplx>& p) { return std::exp(0.3 * p[0] - 0.2 * p[1] + 0.1 * p[2]) + p[0] * p[2]; };
      std::vector<cplx> p = {random_complex(rng), random_complex(rng), random_complex(rng)};
      std::vector<cplx> q = p;
      q[j] += 1.0;
      cplx lhs = (sigma * G).apply(F, p);
      cplx rhs = (G * sigma).apply(F, p);
      cplx expect = (g.evaluate(q) - g.evaluate(p)) * F(q);
      CHECK(std::abs(lhs - rhs - expect) < 1e-9 * (1 + std::abs(expect)));
    }
  }
}

TEST_CASE("generators annihilate the Gamma oracle") {
  // ∫ y^nu (1+y)^{-s} dy/y = Gamma(nu) Gamma(s - nu) / Gamma(s) continues meromorphically.
  auto gens = annihilator_generators(beta_spec(3, 1));
  auto F = [](const std::vector<cplx>& p) { return beta_oracle(p[0], p[1]); };
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    std::vector<cplx> p = {cplx(2.5, 0) + random_complex(rng, 0.5), cplx(1.2, 0) + random_complex(rng, 0.3)};
    for (const auto& g : gens) CHECK(std::abs(g.apply(F, p)) < 1e-9 * std::abs(F(p)));
  }
}

TEST_CASE("numeric verification of shift relations") {
  McOptions opt;
  opt.samples = 400000;
  opt.seed = 7;
  // Positive chart f = 1 + y at (s~, nu) = (1/2, 1/3).
  auto beta = beta_spec(Rational(1, 2), Rational(1, 3));
  auto gens = annihilator_generators(beta);
  auto r1 = verify_shift(beta, gens[0], opt);
  CHECK(r1.passed);
  CHECK(r1.points.size() == 3);
  CHECK(r1.std_error > 0);
  // The relation cancels sample by sample, so only the rounding floor remains.
  CHECK(std::abs(r1.estimate) < 1e-12 * r1.scale);
  CHECK(r1.scale > beta_oracle(0.5, 1.0 / 3).real());

  // (nu - 1) I(s~, nu - 1) = s~ I(s~ + 1, nu) at (3, 3/2).
  auto b2 = beta_spec(3, Rational(3, 2));
  auto r2 = verify_shift(b2, annihilator_generators(b2)[1], opt);
  CHECK(r2.passed);
  double lhs = 0.5 * beta_oracle(3, 0.5).real(), rhs = 3 * beta_oracle(4, 1.5).real();
  CHECK(std::abs(lhs - rhs) < 1e-10 * rhs);

  // A deliberately wrong operator fails.
  auto wrong = gens[0] + ShiftOperator::constant(1, 1, Rational(1, 10));
  CHECK_FALSE(verify_shift(beta, wrong, opt).passed);

  CHECK(verify_shift(beta, ShiftOperator(1, 1), opt).passed);

  // The literal (0,1)-chart point sigma_s from s = 1/2 needs s~ < nu: refused.
  auto bad = beta_spec(Rational(1, 3), Rational(1, 2));
  CHECK_THROWS_AS(verify_shift(bad, annihilator_generators(bad)[0], opt), PreconditionError);
  CHECK_THROWS_AS(verify_shift(one_minus_x(Rational(1, 2), Rational(1, 3)), gens[0], opt), PreconditionError);
}

TEST_CASE("both generator families on M0,5") {
  auto spec = pentagon_spec(Rational(5, 2), Rational(2));
  spec.s = {Rational(2), Rational(2), Rational(2)};
  REQUIRE(check_convergence(spec).converges);
  McOptions opt;
  opt.samples = 400000;
  opt.seed = 9;
  for (const auto& g : annihilator_generators(spec)) {
    auto r = verify_shift(spec, g, opt);
    CAPTURE(to_string(g));
    CHECK(r.passed);
    CHECK(r.std_error > 0);
  }
  auto j = to_json(verify_shift(spec, annihilator_generators(spec)[0], opt));
  CHECK(j["passed"] == true);
  CHECK(to_json(annihilator_generators(spec)[3])["terms"].size() == 4);
}
