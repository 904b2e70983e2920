// Exact rational polytopes in small dimension. Faces follow the minimum
// convention: the face selected by y is argmin_{q in P} y·q.
#pragma once

#include "euler/laurent.hpp"
#include "euler/rational.hpp"

#include <nlohmann/json_fwd.hpp>

#include <vector>

namespace euler {

// Inequality normal·p >= offset with a primitive integer normal.
struct Facet {
  IntVec normal;
  Rational offset;
  friend bool operator==(const Facet&, const Facet&) = default;
};

class Polytope {
 public:
  Polytope() = default;

  size_t ambient_dim() const { return ambient_; }
  // Affine dimension; -1 for the empty set.
  int dim() const { return dim_; }
  bool full_dimensional() const { return dim_ == static_cast<int>(ambient_); }

  // Lexicographically sorted, irredundant.
  const std::vector<RatVec>& vertices() const { return vertices_; }
  // Empty unless full-dimensional.
  const std::vector<Facet>& facets() const { return facets_; }
  // Vertex indices on each facet; for lower-dimensional polytopes these are
  // the facets relative to the affine hull.
  const std::vector<std::vector<size_t>>& facet_vertices() const { return facet_vertices_; }

  friend Polytope convex_hull(const std::vector<RatVec>& points);
  friend bool operator==(const Polytope& a, const Polytope& b) {
    return a.ambient_ == b.ambient_ && a.vertices_ == b.vertices_;
  }

 private:
  size_t ambient_ = 0;
  int dim_ = -1;
  std::vector<RatVec> vertices_;
  std::vector<Facet> facets_;
  std::vector<std::vector<size_t>> facet_vertices_;
};

inline constexpr size_t kMaxAmbientDim = 6;

Polytope convex_hull(const std::vector<RatVec>& points);
Polytope newton_polytope(const LaurentPolynomial& f);
Polytope minkowski_sum(const Polytope& P, const Polytope& Q);
Polytope dilate(const Polytope& P, const Rational& lambda);
Polytope translate(const Polytope& P, const RatVec& shift);
Polytope weighted_sum(const std::vector<Polytope>& polys, const RatVec& weights);

enum class Location { Interior, Boundary, Exterior };
Location locate(const Polytope& P, const RatVec& p);
bool contains_interior(const Polytope& P, const RatVec& p);
// Vertex indices attaining min y·v (a face; more than one index on ties).
std::vector<size_t> minimizing_face(const Polytope& P, const RatVec& y);

struct NormalFan {
  std::vector<IntVec> rays;                  // one per facet
  std::vector<std::vector<size_t>> cones;    // per vertex: indices into rays
};
NormalFan normal_fan(const Polytope& P);

Polytope polar_dual(const Polytope& P);
// n! times the Euclidean volume; zero for lower-dimensional input.
Rational normalized_volume(const Polytope& P);
Rational euclidean_volume(const Polytope& P);
// Pulling triangulation from the lexicographically smallest vertex, recursing on facets.
std::vector<std::vector<RatVec>> pulling_triangulation(const Polytope& P);
// B_v = {y in C_v : y·(v - base) >= -1}, in vertex order.
std::vector<Polytope> dual_cells(const Polytope& P, const RatVec& base);

// Inward primitive facet normals of the cone generated by integer vectors.
std::vector<IntVec> cone_facets(const std::vector<IntVec>& generators);

nlohmann::json to_json(const Polytope& P);
nlohmann::json rational_json(const Rational& q);
nlohmann::json rational_vector_json(const RatVec& v);

// Rank and reduced row echelon form over Q (in place); returns pivot columns.
std::vector<size_t> row_reduce(std::vector<RatVec>& M);
Rational determinant(std::vector<RatVec> M);

}  // namespace euler
