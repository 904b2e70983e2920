// A-hypergeometric (GKZ) systems of Euler integrals: Cayley configuration,
// toric binomials, Euler operators, non-resonance and torus specialization.
// Convention throughout: beta = -(s, nu).
#pragma once

#include "euler/spec.hpp"
#include "euler/symbolic.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>

namespace euler {

struct CayleyMatrix {
  size_t ell = 0;
  size_t n = 0;
  // Column (e_i, alpha) for each alpha in the i-th support, in support order.
  std::vector<IntVec> columns;
  std::vector<std::pair<size_t, Exponent>> labels;
  size_t rank = 0;

  size_t rows() const { return ell + n; }
  size_t cols() const { return columns.size(); }
  long at(size_t r, size_t c) const { return columns[c][r]; }
};

// Throws PreconditionError on an empty support list or support.
CayleyMatrix cayley(const std::vector<std::vector<Exponent>>& supports);
// Supports in the polynomials' term order.
CayleyMatrix cayley(const IntegralSpec& spec);

// Lattice basis of ker_Z(A) from unimodular column reduction.
std::vector<IntVec> integer_kernel(const CayleyMatrix& A);
// Largest l1 norm of an integer_kernel vector plus 2 (at least 2).
int default_degree_bound(const CayleyMatrix& A);

// d^u - d^v with u = w+, v = w- for a kernel vector w.
struct Binomial {
  Exponent u;
  Exponent v;
  friend bool operator==(const Binomial&, const Binomial&) = default;
};

// Binomials of all kernel vectors with |w|_1 <= degree_bound (0 selects the
// default bound), one per sign class. With minimal set, a binomial is kept
// only if it is not in the ideal of those kept before it; candidates are
// visited by degree, then smallest trailing monomial, then leading monomial,
// and membership is decided by connectivity of the fiber {m >= 0 : A m = A u}.
std::vector<Binomial> toric_binomials(const CayleyMatrix& A, int degree_bound = 0, bool minimal = true);

WeylOperator binomial_operator(const Binomial& b, size_t nparams);
// sum_alpha A_{k,alpha} theta_alpha - beta_k with symbolic beta_k = -(s, nu)_k.
std::vector<WeylOperator> euler_operators(const CayleyMatrix& A);

struct GkzSystem {
  CayleyMatrix A;
  int degree_bound = 0;
  std::vector<Binomial> binomials;
  std::vector<WeylOperator> euler_ops;
  std::vector<std::string> params;
  // -(s, nu) when the system was built from a spec.
  std::optional<std::vector<ExactComplex>> beta;

  std::vector<std::string> z_names() const;
};

GkzSystem gkz_system(const CayleyMatrix& A, int degree_bound = 0);
GkzSystem gkz_system(const IntegralSpec& spec, int degree_bound = 0);

struct ResonanceReport {
  bool nonresonant = true;
  std::vector<IntVec> facets;  // inward primitive normals of pos(A)
  std::optional<IntVec> witness;
  std::optional<ExactComplex> pairing;  // witness . beta
};

// Throws PreconditionError when pos(A) is not full-dimensional.
ResonanceReport check_nonresonant(const CayleyMatrix& A, const std::vector<ExactComplex>& beta);

// Fixed coordinates z_f = value; every other coordinate becomes z_r = scale_r * t_r.
struct TorusRecipe {
  std::vector<size_t> fixed;           // 0-based column indices
  std::vector<Rational> fixed_values;  // empty means all 1
  std::vector<Rational> scales;        // per free column; empty means all 1
  std::vector<std::string> names;      // per free column; empty means t1, t2, ...
};

struct SpecializedSystem {
  std::vector<size_t> free;          // z indices of the remaining variables
  std::vector<std::string> vars;
  std::vector<std::string> params;
  std::vector<size_t> solve_rows;    // Euler rows used to eliminate the fixed derivatives
  std::vector<WeylOperator> binomial_ops;
  std::vector<WeylOperator> euler_ops;  // leftover Euler rows

  std::vector<WeylOperator> all() const;
};

// The fixed columns must have full column rank in A; rows are picked greedily
// from the last row upward. Throws PreconditionError("torus recipe not
// applicable") otherwise.
SpecializedSystem specialize(const GkzSystem& sys, const TorusRecipe& recipe);

// Normalized volume, in dimension rows-1, of the columns with the first indicator
// row dropped (the holonomic rank of a non-resonant system).
Rational gkz_volume(const CayleyMatrix& A);

nlohmann::json to_json(const CayleyMatrix& A);
nlohmann::json to_json(const GkzSystem& sys);
nlohmann::json to_json(const ResonanceReport& r);
nlohmann::json to_json(const SpecializedSystem& s);
TorusRecipe recipe_from_json(const nlohmann::json& j);

}  // namespace euler
