#include "euler/convergence.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <set>

using namespace euler;
using namespace testutil;

TEST_CASE("pentagon convergence") {
  auto r = check_convergence(pentagon_spec(1, 1));
  CHECK(r.converges);
  CHECK(r.violated.empty());
  auto d = check_convergence(pentagon_spec(2, 2));
  CHECK_FALSE(d.converges);
  REQUIRE(d.violated.size() == 2);
  CHECK(d.violated[1].facet.r == IntVec{0, -1});
  CHECK(d.violated[1].slack == 0);
  CHECK(d.violated[0].facet.r == IntVec{-1, -1});
  CHECK(d.violated[0].slack == -1);
  CHECK(d.violated[0].facet.w == RatVec{-1, -1, -1});
  CHECK(d.reasons == std::vector<std::string>{"outside"});
}

TEST_CASE("boundary and degenerate inputs") {
  auto b = check_convergence(beta_spec(1, 0));
  CHECK_FALSE(b.converges);
  CHECK(b.boundary);
  auto spec = beta_spec(1, Rational(1, 2));
  spec.s = {Rational(-1)};
  CHECK(check_convergence(spec).reasons == std::vector<std::string>{"nonpositive_s"});
  IntegralSpec mono;
  mono.vars = {"x1", "x2"};
  mono.polys = {parse("1+x1", mono.vars)};
  mono.s = {Rational(1)};
  mono.nu = {Rational(1, 2), Rational(1, 2)};
  CHECK(check_convergence(mono).reasons == std::vector<std::string>{"degenerate_polytope"});
}

TEST_CASE("gamma skeleton") {
  auto beta = gamma_skeleton({parse("1+y", {"y"})});
  REQUIRE(beta.factors.size() == 2);
  CHECK(beta.factors[0] == GammaFactor{{1}, {0}});
  CHECK(beta.factors[1] == GammaFactor{{-1}, {-1}});
  CHECK(gamma_text(beta) == "Gamma(nu) * Gamma(-nu + s)");

  auto pent = gamma_skeleton(pentagon_spec().polys);
  CHECK(pent.factors.size() == 5);
  CHECK_THROWS_AS(gamma_skeleton({parse("x", {"x"})}), PreconditionError);
}

TEST_CASE("gamma skeleton facet count matches P(s)") {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 10; ++k) {
    std::vector<LaurentPolynomial> polys;
    for (int i = 0; i < 2; ++i) polys.push_back(random_poly(rng, 2, 3, 0, 2, true));
    try {
      auto sk = gamma_skeleton(polys);
      std::vector<Polytope> newton;
      for (const auto& f : polys) newton.push_back(newton_polytope(f));
      RatVec s = {random_rational(rng, 1, 4), random_rational(rng, 1, 4)};
      auto P = weighted_sum(newton, s);
      CHECK(sk.factors.size() == P.facets().size());
    } catch (const PreconditionError&) {
    }
  }
}

TEST_CASE("decision is invariant under joint scaling") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    auto spec = pentagon_spec(random_rational(rng, 0, 3), random_rational(rng, 0, 3));
    for (auto& z : spec.s) z = ExactComplex(random_rational(rng, 1, 3));
    Rational lambda = random_rational(rng, 1, 5);
    auto scaled = rescaled(spec, lambda);
    CHECK(check_convergence(spec).converges == check_convergence(scaled).converges);
  }
}
