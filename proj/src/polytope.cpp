#include "euler/polytope.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace euler {

using nlohmann::json;

std::vector<size_t> row_reduce(std::vector<RatVec>& M) {
  std::vector<size_t> pivots;
  if (M.empty()) return pivots;
  const size_t rows = M.size(), cols = M[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[r]);
    Rational inv = 1 / M[r][c];
    for (size_t k = c; k < cols; ++k) M[r][k] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      Rational f = M[i][c];
      for (size_t k = c; k < cols; ++k) M[i][k] -= f * M[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  M.resize(r);
  return pivots;
}

Rational determinant(std::vector<RatVec> M) {
  const size_t n = M.size();
  Rational det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && M[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(M[p], M[c]);
      det = -det;
    }
    det *= M[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (M[i][c] == 0) continue;
      Rational f = M[i][c] / M[c][c];
      for (size_t k = c; k < n; ++k) M[i][k] -= f * M[c][k];
    }
  }
  return det;
}

namespace {

// Unique (up to scale) normal of the hyperplane through the rows, or empty
// if the rows do not have corank one.
RatVec hyperplane_normal(std::vector<RatVec> rows, size_t d) {
  if (rows.empty()) return RatVec(d == 1 ? 1 : 0, Rational(1));
  auto piv = row_reduce(rows);
  if (piv.size() != d - 1) return {};
  size_t free_col = 0;
  for (size_t c = 0, k = 0; c < d; ++c) {
    if (k < piv.size() && piv[k] == c) {
      ++k;
      continue;
    }
    free_col = c;
    break;
  }
  RatVec nrm(d, 0);
  nrm[free_col] = 1;
  for (size_t r = 0; r < piv.size(); ++r) nrm[piv[r]] = -rows[r][free_col];
  return nrm;
}

// Calls fn on every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(size_t n, size_t k, Fn fn) {
  if (k > n) return;
  std::vector<size_t> idx(k);
  for (size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

Polytope convex_hull(const std::vector<RatVec>& input) {
  if (input.empty()) throw std::invalid_argument("convex_hull of an empty point set");
  const size_t n = input[0].size();
  if (n > kMaxAmbientDim) throw std::invalid_argument("convex_hull supports ambient dimension <= 6");
  for (const auto& p : input)
    if (p.size() != n) throw std::invalid_argument("points of different dimension");

  std::set<RatVec> uniq(input.begin(), input.end());
  std::vector<RatVec> pts(uniq.begin(), uniq.end());

  Polytope P;
  P.ambient_ = n;

  // affine hull: project to pivot coordinates of the difference space
  std::vector<RatVec> diffs;
  for (size_t i = 1; i < pts.size(); ++i) {
    RatVec d(n);
    for (size_t j = 0; j < n; ++j) d[j] = pts[i][j] - pts[0][j];
    diffs.push_back(d);
  }
  std::vector<size_t> coords = diffs.empty() ? std::vector<size_t>{} : row_reduce(diffs);
  const size_t d = coords.size();
  P.dim_ = static_cast<int>(d);
  if (d == 0) {
    P.vertices_ = {pts[0]};
    return P;
  }
  std::vector<RatVec> q(pts.size(), RatVec(d));
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t k = 0; k < d; ++k) q[i][k] = pts[i][coords[k]];

  struct Rel {
    RatVec normal;
    std::vector<size_t> on;
  };
  std::map<IntVec, Rel> found;
  for_each_subset(q.size(), d, [&](const std::vector<size_t>& sub) {
    std::vector<RatVec> rows;
    for (size_t k = 1; k < sub.size(); ++k) {
      RatVec r(d);
      for (size_t j = 0; j < d; ++j) r[j] = q[sub[k]][j] - q[sub[0]][j];
      rows.push_back(r);
    }
    RatVec nrm = hyperplane_normal(rows, d);
    if (nrm.empty()) return;
    IntVec prim = primitive_direction(nrm);
    RatVec pr = to_rational(prim);
    Rational c = dot(pr, q[sub[0]]);
    int sign = 0;
    std::vector<size_t> on;
    for (size_t i = 0; i < q.size(); ++i) {
      Rational v = dot(pr, q[i]) - c;
      if (v == 0) {
        on.push_back(i);
        continue;
      }
      int sg = v > 0 ? 1 : -1;
      if (sign == 0) sign = sg;
      else if (sg != sign) return;
    }
    if (sign < 0)
      for (auto& x : prim) x = -x;
    if (sign == 0) return;  // cannot happen in the projected full-dimensional frame
    if (!found.count(prim)) found.emplace(prim, Rel{to_rational(prim), on});
  });

  // a point is a vertex iff the normals of its facets span R^d
  std::vector<size_t> vert_idx;
  for (size_t i = 0; i < q.size(); ++i) {
    std::vector<RatVec> normals;
    for (const auto& [k, rel] : found)
      if (std::binary_search(rel.on.begin(), rel.on.end(), i)) normals.push_back(rel.normal);
    if (normals.size() >= d && row_reduce(normals).size() == d) vert_idx.push_back(i);
  }
  std::map<size_t, size_t> remap;
  for (size_t k = 0; k < vert_idx.size(); ++k) {
    remap[vert_idx[k]] = k;
    P.vertices_.push_back(pts[vert_idx[k]]);
  }
  for (const auto& [prim, rel] : found) {
    std::vector<size_t> fv;
    for (size_t i : rel.on)
      if (remap.count(i)) fv.push_back(remap[i]);
    P.facet_vertices_.push_back(fv);
    if (d == n) {
      RatVec pr = to_rational(prim);
      P.facets_.push_back({prim, dot(pr, P.vertices_[fv[0]])});
    }
  }
  return P;
}

Polytope newton_polytope(const LaurentPolynomial& f) {
  if (f.is_zero()) throw std::invalid_argument("Newton polytope of the zero polynomial");
  std::vector<RatVec> pts;
  for (const auto& e : f.support()) {
    RatVec p;
    for (int k : e) p.emplace_back(k);
    pts.push_back(p);
  }
  return convex_hull(pts);
}

Polytope minkowski_sum(const Polytope& P, const Polytope& Q) {
  if (P.ambient_dim() != Q.ambient_dim()) throw std::invalid_argument("Minkowski sum dimension mismatch");
  std::vector<RatVec> pts;
  for (const auto& a : P.vertices())
    for (const auto& b : Q.vertices()) {
      RatVec s(a);
      for (size_t j = 0; j < s.size(); ++j) s[j] += b[j];
      pts.push_back(s);
    }
  return convex_hull(pts);
}

Polytope dilate(const Polytope& P, const Rational& lambda) {
  std::vector<RatVec> pts = P.vertices();
  for (auto& p : pts)
    for (auto& x : p) x *= lambda;
  return convex_hull(pts);
}

Polytope translate(const Polytope& P, const RatVec& shift) {
  std::vector<RatVec> pts = P.vertices();
  for (auto& p : pts)
    for (size_t j = 0; j < p.size(); ++j) p[j] += shift.at(j);
  return convex_hull(pts);
}

Polytope weighted_sum(const std::vector<Polytope>& polys, const RatVec& weights) {
  if (polys.empty() || polys.size() != weights.size())
    throw std::invalid_argument("weighted_sum needs one weight per polytope");
  for (const auto& w : weights)
    if (w <= 0) throw std::invalid_argument("weighted_sum weights must be positive");
  Polytope acc = dilate(polys[0], weights[0]);
  for (size_t i = 1; i < polys.size(); ++i) acc = minkowski_sum(acc, dilate(polys[i], weights[i]));
  return acc;
}

Location locate(const Polytope& P, const RatVec& p) {
  if (!P.full_dimensional()) throw std::invalid_argument("polytope is not full-dimensional");
  bool boundary = false;
  for (const auto& f : P.facets()) {
    Rational v = dot(f.normal, p) - f.offset;
    if (v < 0) return Location::Exterior;
    if (v == 0) boundary = true;
  }
  return boundary ? Location::Boundary : Location::Interior;
}

bool contains_interior(const Polytope& P, const RatVec& p) { return locate(P, p) == Location::Interior; }

std::vector<size_t> minimizing_face(const Polytope& P, const RatVec& y) {
  std::vector<size_t> out;
  Rational best;
  for (size_t i = 0; i < P.vertices().size(); ++i) {
    Rational v = dot(y, P.vertices()[i]);
    if (out.empty() || v < best) {
      best = v;
      out = {i};
    } else if (v == best) {
      out.push_back(i);
    }
  }
  return out;
}

NormalFan normal_fan(const Polytope& P) {
  if (!P.full_dimensional()) throw std::invalid_argument("normal fan needs a full-dimensional polytope");
  NormalFan fan;
  fan.cones.resize(P.vertices().size());
  for (size_t f = 0; f < P.facets().size(); ++f) {
    fan.rays.push_back(P.facets()[f].normal);
    for (size_t v : P.facet_vertices()[f]) fan.cones[v].push_back(f);
  }
  return fan;
}

Polytope polar_dual(const Polytope& P) {
  if (!P.full_dimensional()) throw std::invalid_argument("polar dual needs a full-dimensional polytope");
  std::vector<RatVec> pts;
  for (const auto& f : P.facets()) {
    if (f.offset >= 0)
      throw std::invalid_argument("origin is not interior to the polytope; translate by -nu first");
    RatVec y = to_rational(f.normal);
    for (auto& x : y) x /= -f.offset;
    pts.push_back(y);
  }
  return convex_hull(pts);
}

namespace {

void pull(const std::vector<RatVec>& pts, std::vector<std::vector<RatVec>>& out) {
  Polytope F = convex_hull(pts);
  if (F.dim() == 0) {
    out.push_back({F.vertices()[0]});
    return;
  }
  const RatVec& apex = F.vertices()[0];
  for (const auto& fv : F.facet_vertices()) {
    if (std::find(fv.begin(), fv.end(), size_t{0}) != fv.end()) continue;
    std::vector<RatVec> face;
    for (size_t v : fv) face.push_back(F.vertices()[v]);
    std::vector<std::vector<RatVec>> sub;
    pull(face, sub);
    for (auto& s : sub) {
      s.insert(s.begin(), apex);
      out.push_back(std::move(s));
    }
  }
}

}  // namespace

std::vector<std::vector<RatVec>> pulling_triangulation(const Polytope& P) {
  std::vector<std::vector<RatVec>> out;
  pull(P.vertices(), out);
  return out;
}

Rational normalized_volume(const Polytope& P) {
  if (!P.full_dimensional()) return 0;
  const size_t n = P.ambient_dim();
  Rational vol = 0;
  for (const auto& simplex : pulling_triangulation(P)) {
    std::vector<RatVec> M;
    for (size_t k = 1; k <= n; ++k) {
      RatVec r(n);
      for (size_t j = 0; j < n; ++j) r[j] = simplex[k][j] - simplex[0][j];
      M.push_back(r);
    }
    vol += abs(determinant(M));
  }
  return vol;
}

Rational euclidean_volume(const Polytope& P) {
  Rational fact = 1;
  for (size_t k = 2; k <= P.ambient_dim(); ++k) fact *= k;
  return normalized_volume(P) / fact;
}

std::vector<Polytope> dual_cells(const Polytope& P, const RatVec& base) {
  if (!contains_interior(P, base)) throw std::invalid_argument("base point is not interior");
  const size_t n = P.ambient_dim();
  std::vector<std::vector<RatVec>> corners(P.vertices().size(), {RatVec(n, 0)});
  for (size_t f = 0; f < P.facets().size(); ++f) {
    const auto& fc = P.facets()[f];
    Rational off = fc.offset - dot(fc.normal, base);  // < 0
    RatVec y = to_rational(fc.normal);
    for (auto& x : y) x /= -off;
    for (size_t v : P.facet_vertices()[f]) corners[v].push_back(y);
  }
  std::vector<Polytope> cells;
  for (const auto& c : corners) cells.push_back(convex_hull(c));
  return cells;
}

std::vector<IntVec> cone_facets(const std::vector<IntVec>& generators) {
  if (generators.empty()) throw std::invalid_argument("cone without generators");
  const size_t d = generators[0].size();
  std::set<IntVec> dirs;
  for (const auto& g : generators) {
    IntVec p = primitive_direction(to_rational(g));
    if (std::all_of(p.begin(), p.end(), [](long x) { return x == 0; })) continue;
    dirs.insert(p);
  }
  std::vector<RatVec> gens;
  for (const auto& g : dirs) gens.push_back(to_rational(g));
  {
    std::vector<RatVec> M = gens;
    if (row_reduce(M).size() != d) throw std::invalid_argument("degenerate cone: generators do not span");
  }
  std::set<IntVec> out;
  if (d == 1) {
    bool pos = false, neg = false;
    for (const auto& g : gens) (g[0] > 0 ? pos : neg) = true;
    if (pos && neg) throw std::invalid_argument("degenerate cone: not pointed");
    out.insert(IntVec{pos ? 1L : -1L});
    return {out.begin(), out.end()};
  }
  for_each_subset(gens.size(), d - 1, [&](const std::vector<size_t>& sub) {
    std::vector<RatVec> rows;
    for (size_t i : sub) rows.push_back(gens[i]);
    RatVec nrm = hyperplane_normal(rows, d);
    if (nrm.empty()) return;
    int sign = 0;
    for (const auto& g : gens) {
      Rational v = dot(nrm, g);
      if (v == 0) continue;
      int sg = v > 0 ? 1 : -1;
      if (sign == 0) sign = sg;
      else if (sg != sign) return;
    }
    if (sign == 0) return;
    IntVec prim = primitive_direction(nrm);
    if (sign < 0)
      for (auto& x : prim) x = -x;
    out.insert(prim);
  });
  return {out.begin(), out.end()};
}

json rational_json(const Rational& q) { return json::array({numerator_of(q).str(), denominator_of(q).str()}); }

json rational_vector_json(const RatVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json to_json(const Polytope& P) {
  json verts = json::array();
  for (const auto& v : P.vertices()) {
    json row = json::array();
    for (const auto& x : v) row.push_back(rational_json(x));
    verts.push_back(row);
  }
  json facets = json::array();
  for (const auto& f : P.facets()) facets.push_back({{"normal", f.normal}, {"offset", rational_json(f.offset)}});
  return {{"dim", P.dim()}, {"vertices", verts}, {"facets", facets}};
}

}  // namespace euler
