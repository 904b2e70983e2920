#include "test_util.hpp"

#include <doctest.h>

#include <set>

using namespace euler;
using namespace testutil;

namespace {

std::vector<RatVec> pts(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<RatVec> out;
  for (auto r : rows) {
    RatVec v;
    for (long x : r) v.emplace_back(x);
    out.push_back(v);
  }
  return out;
}

std::set<RatVec> vset(const Polytope& P) { return {P.vertices().begin(), P.vertices().end()}; }

std::set<RatVec> pset(std::initializer_list<std::initializer_list<long>> rows) {
  auto v = pts(rows);
  return {v.begin(), v.end()};
}

Polytope pentagon() {
  auto spec = pentagon_spec();
  return weighted_sum(spec.newton_polytopes(), {1, 1, 1});
}

}  // namespace

TEST_CASE("convex hull examples") {
  auto tri = convex_hull(pts({{0, 0}, {1, 0}, {0, 1}}));
  CHECK(tri.dim() == 2);
  CHECK(tri.vertices().size() == 3);
  CHECK(tri.facets().size() == 3);

  // support of U + F for the triangle graph
  auto oct = convex_hull(pts({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  CHECK(oct.dim() == 3);
  CHECK(oct.vertices().size() == 6);
  CHECK(oct.facets().size() == 8);

  auto pt = convex_hull(pts({{2, 3}}));
  CHECK(pt.dim() == 0);
  CHECK(pt.facets().empty());

  auto seg = convex_hull(pts({{0, 0}, {1, 1}, {2, 2}, {1, 1}}));
  CHECK(seg.dim() == 1);
  CHECK(vset(seg) == pset({{0, 0}, {2, 2}}));

  CHECK_THROWS(convex_hull(std::vector<RatVec>(1, RatVec(7, 0))));
}

TEST_CASE("facets and vertices are consistent") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k) {
    size_t n = 2 + k % 2;
    std::vector<RatVec> cloud;
    std::uniform_int_distribution<int> c(-3, 3);
    for (int i = 0; i < 9; ++i) {
      RatVec p;
      for (size_t j = 0; j < n; ++j) p.emplace_back(c(rng));
      cloud.push_back(p);
    }
    auto P = convex_hull(cloud);
    if (!P.full_dimensional()) continue;
    for (const auto& p : cloud) CHECK(locate(P, p) != Location::Exterior);
    for (size_t v = 0; v < P.vertices().size(); ++v) {
      int tight = 0;
      for (const auto& f : P.facets()) {
        Rational s = dot(f.normal, P.vertices()[v]) - f.offset;
        CHECK(s >= 0);
        if (s == 0) ++tight;
      }
      CHECK(tight >= static_cast<int>(n));
      // a vertex is not in the hull of the others
      std::vector<RatVec> rest;
      for (size_t u = 0; u < P.vertices().size(); ++u)
        if (u != v) rest.push_back(P.vertices()[u]);
      auto Q = convex_hull(rest);
      CHECK(Q.vertices().size() + 1 >= P.vertices().size());
      CHECK(vset(Q).count(P.vertices()[v]) == 0);
    }
  }
}

TEST_CASE("Minkowski sums") {
  auto P = pentagon();
  CHECK(P.vertices().size() == 5);
  CHECK(vset(P) == pset({{1, 0}, {3, 0}, {1, 2}, {0, 2}, {0, 1}}));
  auto doubled = weighted_sum(pentagon_spec().newton_polytopes(), {2, 2, 2});
  std::set<RatVec> twice;
  for (auto v : P.vertices()) {
    for (auto& x : v) x *= 2;
    twice.insert(v);
  }
  CHECK(vset(doubled) == twice);
  CHECK(minkowski_sum(P, convex_hull(pts({{0, 0}}))) == P);
  auto sq = minkowski_sum(convex_hull(pts({{0, 0}, {1, 0}})), convex_hull(pts({{0, 0}, {0, 1}})));
  CHECK(sq.vertices().size() == 4);
  CHECK(normalized_volume(sq) == 2);
  CHECK(weighted_sum({P}, {1}) == P);
  CHECK_THROWS(weighted_sum({P}, {0}));
}

TEST_CASE("Newton polytope of a product is the Minkowski sum") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 20; ++k) {
    auto f = random_poly(rng, 2, 4, -2, 3, true);
    auto g = random_poly(rng, 2, 3, -1, 3, true);
    CHECK(newton_polytope(f * g) == minkowski_sum(newton_polytope(f), newton_polytope(g)));
  }
}

TEST_CASE("interior membership") {
  auto P = pentagon();
  CHECK(contains_interior(P, {1, 1}));
  CHECK_FALSE(contains_interior(P, {2, 2}));
  CHECK_FALSE(contains_interior(P, {1, 0}));
  CHECK(locate(P, {1, 0}) == Location::Boundary);
  CHECK_THROWS(contains_interior(convex_hull(pts({{0, 0}, {1, 1}})), {0, 0}));
}

TEST_CASE("normal fans") {
  auto fan = normal_fan(pentagon());
  CHECK(fan.rays.size() == 5);
  CHECK(fan.cones.size() == 5);
  for (const auto& c : fan.cones) CHECK(c.size() == 2);

  auto sq = convex_hull(pts({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  auto sf = normal_fan(sq);
  CHECK(sf.cones.size() == 4);
  std::set<IntVec> rays(sf.rays.begin(), sf.rays.end());
  CHECK(rays == std::set<IntVec>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});

  auto seg = convex_hull({{Rational(0)}, {Rational(3)}});
  auto segfan = normal_fan(seg);
  CHECK(segfan.cones.size() == 2);
  CHECK(std::set<IntVec>(segfan.rays.begin(), segfan.rays.end()) == std::set<IntVec>{{1}, {-1}});

  // every generic direction selects one vertex, inside that vertex's cone
  std::mt19937_64 rng(2);
  auto P = pentagon();
  for (int k = 0; k < 200; ++k) {
    RatVec y = {random_rational(rng, -5, 5, 17), random_rational(rng, -5, 5, 17)};
    auto face = minimizing_face(P, y);
    if (face.size() != 1) continue;
    // y lies in C_v iff y is a nonnegative combination of the two rays
    const auto& c = fan.cones[face[0]];
    std::vector<RatVec> M = {to_rational(fan.rays[c[0]]), to_rational(fan.rays[c[1]])};
    Rational det = determinant(M);
    Rational a = (y[0] * M[1][1] - y[1] * M[1][0]) / det;
    Rational b = (M[0][0] * y[1] - M[0][1] * y[0]) / det;
    CHECK(a >= 0);
    CHECK(b >= 0);
  }
  // ties are reported as a face
  CHECK(minimizing_face(P, {0, 1}).size() == 2);
}

TEST_CASE("polar duals") {
  auto Q = translate(pentagon(), {-1, -1});
  auto D = polar_dual(Q);
  CHECK(vset(D) == pset({{1, 1}, {1, 0}, {0, -1}, {-1, -1}, {0, 1}}));
  CHECK(normalized_volume(D) == 5);
  CHECK(euclidean_volume(D) == Rational(5, 2));

  // segment [-nu, s~-nu] with s~ = 3, nu = 1
  auto seg = convex_hull({{Rational(-1)}, {Rational(2)}});
  auto dseg = polar_dual(seg);
  CHECK(vset(dseg) == std::set<RatVec>{{Rational(-1, 2)}, {Rational(1)}});
  CHECK(normalized_volume(dseg) == Rational(3, 2));

  auto sq = convex_hull(pts({{-1, -1}, {1, -1}, {-1, 1}, {1, 1}}));
  CHECK(vset(polar_dual(sq)) == pset({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
  CHECK_THROWS(polar_dual(pentagon()));
}

TEST_CASE("double polar is the identity") {
  std::mt19937_64 rng(23);
  int done = 0;
  while (done < 20) {
    size_t n = 2 + done % 2;
    std::vector<RatVec> cloud;
    std::uniform_int_distribution<int> c(-3, 3);
    for (int i = 0; i < 8; ++i) {
      RatVec p;
      for (size_t j = 0; j < n; ++j) p.emplace_back(c(rng));
      cloud.push_back(p);
    }
    auto P = convex_hull(cloud);
    if (!P.full_dimensional() || !contains_interior(P, RatVec(n, 0))) continue;
    CHECK(polar_dual(polar_dual(P)) == P);
    ++done;
  }
}

TEST_CASE("normalized volume") {
  CHECK(normalized_volume(convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}))) == 1);
  CHECK(normalized_volume(convex_hull(pts({{0, 0}, {1, 0}, {0, 1}, {1, 1}}))) == 2);
  CHECK(normalized_volume(convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 0, 1},
                                           {0, 1, 1}, {1, 1, 1}}))) == 6);
  CHECK(normalized_volume(convex_hull(pts({{0, 0}, {1, 1}}))) == 0);

  // invariance under unimodular maps
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    std::vector<RatVec> cloud;
    std::uniform_int_distribution<int> c(-3, 3);
    for (int i = 0; i < 7; ++i) cloud.push_back({Rational(c(rng)), Rational(c(rng))});
    auto P = convex_hull(cloud);
    // shear (x, y) -> (x + 2y, y) then swap
    std::vector<RatVec> img;
    for (const auto& p : cloud) img.push_back({p[1], p[0] + 2 * p[1]});
    CHECK(normalized_volume(P) == normalized_volume(convex_hull(img)));
  }
}

TEST_CASE("dual cells subdivide the polar dual") {
  auto P = pentagon();
  auto cells = dual_cells(P, {1, 1});
  CHECK(cells.size() == 5);
  Rational sum = 0;
  for (const auto& c : cells) sum += normalized_volume(c);
  CHECK(sum == 5);

  auto seg = convex_hull({{Rational(0)}, {Rational(3)}});
  auto sc = dual_cells(seg, {Rational(1)});
  REQUIRE(sc.size() == 2);
  CHECK(normalized_volume(sc[0]) == 1);
  CHECK(normalized_volume(sc[1]) == Rational(1, 2));

  auto sq = convex_hull(pts({{-1, -1}, {1, -1}, {-1, 1}, {1, 1}}));
  auto qc = dual_cells(sq, {0, 0});
  for (const auto& c : qc) CHECK(normalized_volume(c) == 1);

  std::mt19937_64 rng(41);
  for (int k = 0; k < 10; ++k) {
    std::vector<RatVec> cloud;
    std::uniform_int_distribution<int> c(-4, 4);
    for (int i = 0; i < 8; ++i) cloud.push_back({Rational(c(rng)), Rational(c(rng)), Rational(c(rng))});
    auto Q = convex_hull(cloud);
    if (!Q.full_dimensional()) continue;
    RatVec base(3, 0);
    for (const auto& v : Q.vertices())
      for (size_t j = 0; j < 3; ++j) base[j] += v[j] / Q.vertices().size();
    Rational total = 0;
    for (const auto& cell : dual_cells(Q, base)) total += normalized_volume(cell);
    auto shift = base;
    for (auto& x : shift) x = -x;
    CHECK(total == normalized_volume(polar_dual(translate(Q, shift))));
  }
}

TEST_CASE("exponential integral over a cone equals the normalized volume of its truncation") {
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<int> c(-3, 3);
  int done = 0;
  while (done < 20) {
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
    auto [mean, err] = cone_exp_integral(rays, v, rng, 20000);
    CHECK(std::abs(mean - vol) <= 3 * err + 1e-12);
    ++done;
  }
}

TEST_CASE("cone facets") {
  auto f = cone_facets({{1, 0}, {1, 1}});
  CHECK(std::set<IntVec>(f.begin(), f.end()) == std::set<IntVec>{{0, 1}, {1, -1}});
  CHECK_THROWS(cone_facets({{1, 0}, {2, 0}}));
  auto g = cone_facets({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}});
  CHECK(g.size() == 3);
}
