#include "euler/gkz.hpp"

#include "euler/polytope.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace euler {

using json = nlohmann::json;

namespace {

long l1(const IntVec& v) {
  long s = 0;
  for (long x : v) s += std::abs(x);
  return s;
}

int degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

bool divides(const Exponent& a, const Exponent& m) {
  for (size_t j = 0; j < a.size(); ++j)
    if (a[j] > m[j]) return false;
  return true;
}

IntVec image(const CayleyMatrix& A, const Exponent& u) {
  IntVec out(A.rows(), 0);
  for (size_t c = 0; c < A.cols(); ++c)
    if (u[c] != 0)
      for (size_t r = 0; r < A.rows(); ++r) out[r] += A.at(r, c) * u[c];
  return out;
}

// All exponent vectors of total degree k in n variables.
void monomials_of_degree(size_t n, int k, std::vector<Exponent>& out) {
  Exponent e(n, 0);
  auto rec = [&](auto&& self, size_t j, int left) -> void {
    if (j + 1 == n) {
      e[j] = left;
      out.push_back(e);
      return;
    }
    for (int a = left; a >= 0; --a) {
      e[j] = a;
      self(self, j + 1, left - a);
    }
  };
  if (n == 0) return;
  rec(rec, 0, k);
}

// Is u connected to v inside their fiber using moves from the kept binomials?
bool connected(const Exponent& u, const Exponent& v, const std::vector<Binomial>& moves) {
  std::set<Exponent> seen{u};
  std::deque<Exponent> queue{u};
  while (!queue.empty()) {
    Exponent m = queue.front();
    queue.pop_front();
    if (m == v) return true;
    for (const auto& b : moves) {
      for (int dir = 0; dir < 2; ++dir) {
        const Exponent& from = dir == 0 ? b.u : b.v;
        const Exponent& to = dir == 0 ? b.v : b.u;
        if (!divides(from, m)) continue;
        Exponent next = m;
        for (size_t j = 0; j < m.size(); ++j) next[j] += to[j] - from[j];
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
  }
  return false;
}

std::vector<RatVec> rows_of(const CayleyMatrix& A) {
  std::vector<RatVec> M(A.rows(), RatVec(A.cols()));
  for (size_t r = 0; r < A.rows(); ++r)
    for (size_t c = 0; c < A.cols(); ++c) M[r][c] = A.at(r, c);
  return M;
}

}  // namespace

CayleyMatrix cayley(const std::vector<std::vector<Exponent>>& supports) {
  if (supports.empty()) throw PreconditionError("cayley: no supports");
  CayleyMatrix A;
  A.ell = supports.size();
  A.n = supports[0].empty() ? 0 : supports[0][0].size();
  for (size_t i = 0; i < supports.size(); ++i) {
    if (supports[i].empty()) throw PreconditionError("cayley: empty support for polynomial " + std::to_string(i + 1));
    for (const auto& a : supports[i]) {
      if (a.size() != A.n) throw PreconditionError("cayley: inconsistent exponent lengths");
      IntVec col(A.ell + A.n, 0);
      col[i] = 1;
      for (size_t j = 0; j < A.n; ++j) col[A.ell + j] = a[j];
      A.columns.push_back(col);
      A.labels.push_back({i, a});
    }
  }
  auto M = rows_of(A);
  A.rank = row_reduce(M).size();
  return A;
}

CayleyMatrix cayley(const IntegralSpec& spec) {
  std::vector<std::vector<Exponent>> supports;
  for (const auto& f : spec.polys) supports.push_back(f.support());
  return cayley(supports);
}

std::vector<IntVec> integer_kernel(const CayleyMatrix& A) {
  const size_t d = A.rows(), N = A.cols();
  std::vector<IntVec> M(d, IntVec(N));
  for (size_t r = 0; r < d; ++r)
    for (size_t c = 0; c < N; ++c) M[r][c] = A.at(r, c);
  std::vector<IntVec> U(N, IntVec(N, 0));  // U[c] is column c
  for (size_t c = 0; c < N; ++c) U[c][c] = 1;
  auto col_axpy = [&](size_t dst, size_t src, long q) {
    for (size_t r = 0; r < d; ++r) M[r][dst] -= q * M[r][src];
    for (size_t k = 0; k < N; ++k) U[dst][k] -= q * U[src][k];
  };
  auto col_swap = [&](size_t a, size_t b) {
    for (size_t r = 0; r < d; ++r) std::swap(M[r][a], M[r][b]);
    std::swap(U[a], U[b]);
  };
  size_t pc = 0;
  for (size_t r = 0; r < d && pc < N; ++r) {
    while (true) {
      size_t best = N;
      for (size_t c = pc; c < N; ++c)
        if (M[r][c] != 0 && (best == N || std::abs(M[r][c]) < std::abs(M[r][best]))) best = c;
      if (best == N) break;
      col_swap(pc, best);
      bool done = true;
      for (size_t c = pc + 1; c < N; ++c) {
        if (M[r][c] == 0) continue;
        col_axpy(c, pc, M[r][c] / M[r][pc]);
        if (M[r][c] != 0) done = false;
      }
      if (done) {
        ++pc;
        break;
      }
    }
  }
  return {U.begin() + static_cast<long>(pc), U.end()};
}

int default_degree_bound(const CayleyMatrix& A) {
  long best = 0;
  for (const auto& w : integer_kernel(A)) best = std::max(best, l1(w));
  return static_cast<int>(std::max(2L, best + 2));
}

std::vector<Binomial> toric_binomials(const CayleyMatrix& A, int degree_bound, bool minimal) {
  if (degree_bound < 0) throw PreconditionError("degree bound must be positive");
  if (degree_bound == 0) degree_bound = default_degree_bound(A);
  if (integer_kernel(A).empty()) return {};
  const size_t N = A.cols();
  // Every column has a single 1 in the indicator block, so |u| = |v| and
  // |w|_1 = 2|u|.
  std::vector<Binomial> candidates;
  std::map<int, std::map<IntVec, std::vector<Exponent>>> fibers;
  for (int k = 1; 2 * k <= degree_bound; ++k) {
    std::vector<Exponent> monos;
    monomials_of_degree(N, k, monos);
    auto& by_image = fibers[k];
    for (const auto& m : monos) by_image[image(A, m)].push_back(m);
    for (const auto& [img, group] : by_image) {
      for (size_t a = 0; a < group.size(); ++a) {
        for (size_t b = a + 1; b < group.size(); ++b) {
          const Exponent& p = group[a];
          const Exponent& q = group[b];
          bool disjoint = true;
          for (size_t j = 0; j < N && disjoint; ++j) disjoint = p[j] == 0 || q[j] == 0;
          if (!disjoint) continue;
          // Leading monomial is the lexicographically larger one.
          if (p > q) candidates.push_back({p, q});
          else candidates.push_back({q, p});
        }
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Binomial& x, const Binomial& y) {
    int dx = degree(x.u), dy = degree(y.u);
    if (dx != dy) return dx < dy;
    if (x.v != y.v) return x.v < y.v;
    return x.u < y.u;
  });
  std::vector<Binomial> kept;
  for (const auto& c : candidates) {
    if (minimal && connected(c.u, c.v, kept)) continue;
    kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(), [](const Binomial& x, const Binomial& y) {
    int dx = degree(x.u), dy = degree(y.u);
    if (dx != dy) return dx < dy;
    if (x.u != y.u) return x.u > y.u;
    return x.v > y.v;
  });
  return kept;
}

WeylOperator binomial_operator(const Binomial& b, size_t nparams) {
  const size_t N = b.u.size();
  WeylOperator op(N, nparams);
  Exponent zero(N, 0);
  op.add_term(zero, b.u, LaurentPolynomial::constant(nparams, 1));
  op.add_term(zero, b.v, LaurentPolynomial::constant(nparams, -1));
  return op;
}

std::vector<WeylOperator> euler_operators(const CayleyMatrix& A) {
  const size_t N = A.cols(), P = A.rows();
  std::vector<WeylOperator> out;
  for (size_t k = 0; k < P; ++k) {
    WeylOperator op(N, P);
    for (size_t c = 0; c < N; ++c) {
      if (A.at(k, c) == 0) continue;
      Exponent e(N, 0);
      e[c] = 1;
      op.add_term(e, e, LaurentPolynomial::constant(P, Rational(A.at(k, c))));
    }
    // -beta_k is the k-th parameter symbol.
    op.add_term(Exponent(N, 0), Exponent(N, 0), LaurentPolynomial::variable(P, k));
    out.push_back(op);
  }
  return out;
}

std::vector<std::string> GkzSystem::z_names() const {
  std::vector<std::string> out;
  for (size_t c = 0; c < A.cols(); ++c) out.push_back("z" + std::to_string(c + 1));
  return out;
}

GkzSystem gkz_system(const CayleyMatrix& A, int degree_bound) {
  GkzSystem sys;
  sys.A = A;
  sys.degree_bound = degree_bound == 0 ? default_degree_bound(A) : degree_bound;
  sys.binomials = toric_binomials(A, sys.degree_bound);
  sys.euler_ops = euler_operators(A);
  sys.params = parameter_names(A.ell, A.n);
  return sys;
}

GkzSystem gkz_system(const IntegralSpec& spec, int degree_bound) {
  spec.validate();
  GkzSystem sys = gkz_system(cayley(spec), degree_bound);
  std::vector<ExactComplex> beta;
  for (const auto& z : spec.s) beta.push_back(ExactComplex(-z.re, -z.im));
  for (const auto& z : spec.nu) beta.push_back(ExactComplex(-z.re, -z.im));
  sys.beta = beta;
  return sys;
}

ResonanceReport check_nonresonant(const CayleyMatrix& A, const std::vector<ExactComplex>& beta) {
  if (beta.size() != A.rows()) throw PreconditionError("beta must have one entry per row of A");
  ResonanceReport rep;
  try {
    rep.facets = cone_facets(A.columns);
  } catch (const std::invalid_argument& e) {
    throw PreconditionError(std::string("check_nonresonant: ") + e.what());
  }
  for (const auto& r : rep.facets) {
    ExactComplex p;
    for (size_t k = 0; k < r.size(); ++k) {
      p.re += r[k] * beta[k].re;
      p.im += r[k] * beta[k].im;
    }
    if (p.im == 0 && is_integer(p.re)) {
      rep.nonresonant = false;
      rep.witness = r;
      rep.pairing = p;
      break;
    }
  }
  return rep;
}

std::vector<WeylOperator> SpecializedSystem::all() const {
  std::vector<WeylOperator> out = binomial_ops;
  out.insert(out.end(), euler_ops.begin(), euler_ops.end());
  return out;
}

namespace {

// Commutative polynomials in theta_1..theta_m followed by the parameters.
struct ThetaRing {
  size_t m = 0;
  size_t P = 0;

  LaurentPolynomial zero() const { return LaurentPolynomial(m + P); }
  LaurentPolynomial constant(const Rational& c) const { return LaurentPolynomial::constant(m + P, c); }
  LaurentPolynomial theta(size_t r) const { return LaurentPolynomial::variable(m + P, r); }
  LaurentPolynomial param(size_t k) const { return LaurentPolynomial::variable(m + P, m + k); }

  Rational theta_coefficient(const LaurentPolynomial& lin, size_t r) const {
    Exponent e(m + P, 0);
    e[r] = 1;
    return lin.coefficient(e);
  }

  // Reduce q modulo the linear constraints, eliminating thetas outside
  // `avoid` first (highest index first).
  LaurentPolynomial reduce(LaurentPolynomial q, const std::vector<LaurentPolynomial>& constraints,
                           const std::vector<bool>& avoid) const {
    std::vector<std::pair<size_t, LaurentPolynomial>> subs;
    std::vector<bool> used(m, false);
    for (auto E : constraints) {
      for (const auto& [p, val] : subs) E = substitute(E, p, val);
      size_t pivot = m;
      for (int pass = 0; pass < 2 && pivot == m; ++pass)
        for (size_t r = m; r-- > 0;)
          if (!used[r] && (pass == 1 || !avoid[r]) && theta_coefficient(E, r) != 0) {
            pivot = r;
            break;
          }
      if (pivot == m) continue;
      Rational a = theta_coefficient(E, pivot);
      LaurentPolynomial val = theta(pivot) - (Rational(1) / a) * E;
      used[pivot] = true;
      subs.push_back({pivot, val});
    }
    for (const auto& [p, val] : subs) q = substitute(q, p, val);
    return q;
  }

  WeylOperator to_operator(const LaurentPolynomial& q) const {
    WeylOperator out(m, P);
    std::map<std::pair<size_t, int>, WeylOperator> powers;
    auto theta_pow = [&](size_t r, int k) -> const WeylOperator& {
      auto key = std::make_pair(r, k);
      auto it = powers.find(key);
      if (it != powers.end()) return it->second;
      WeylOperator t = WeylOperator::constant(m, P, 1);
      for (int i = 0; i < k; ++i) t = t * WeylOperator::theta(m, P, r);
      return powers.emplace(key, t).first->second;
    };
    for (const auto& [e, c] : q.terms()) {
      Exponent pe(e.begin() + static_cast<long>(m), e.end());
      WeylOperator term = WeylOperator::constant(m, LaurentPolynomial::monomial(pe, c));
      for (size_t r = 0; r < m; ++r)
        if (e[r] != 0) term = term * theta_pow(r, e[r]);
      out = out + term;
    }
    return out;
  }
};

}  // namespace

SpecializedSystem specialize(const GkzSystem& sys, const TorusRecipe& recipe) {
  const CayleyMatrix& A = sys.A;
  const size_t d = A.rows(), N = A.cols(), P = d;
  std::vector<bool> is_fixed(N, false);
  for (size_t f : recipe.fixed) {
    if (f >= N) throw PreconditionError("specialize: fixed index out of range");
    if (is_fixed[f]) throw PreconditionError("specialize: repeated fixed index");
    is_fixed[f] = true;
  }
  const std::vector<size_t>& F = recipe.fixed;
  const size_t k = F.size();
  SpecializedSystem out;
  for (size_t c = 0; c < N; ++c)
    if (!is_fixed[c]) out.free.push_back(c);
  const size_t m = out.free.size();
  if (!recipe.fixed_values.empty() && recipe.fixed_values.size() != k)
    throw PreconditionError("specialize: one value per fixed index");
  if (!recipe.scales.empty() && recipe.scales.size() != m) throw PreconditionError("specialize: one scale per free index");
  if (!recipe.names.empty() && recipe.names.size() != m) throw PreconditionError("specialize: one name per free index");
  std::vector<Rational> values = recipe.fixed_values.empty() ? std::vector<Rational>(k, 1) : recipe.fixed_values;
  std::vector<Rational> scales = recipe.scales.empty() ? std::vector<Rational>(m, 1) : recipe.scales;
  for (const auto& v : values)
    if (v == 0) throw PreconditionError("specialize: fixed values must be nonzero");
  for (const auto& v : scales)
    if (v == 0) throw PreconditionError("specialize: scales must be nonzero");
  for (size_t r = 0; r < m; ++r)
    out.vars.push_back(recipe.names.empty() ? "t" + std::to_string(r + 1) : recipe.names[r]);
  out.params = sys.params;

  // Rows solving for theta_F, chosen greedily from the bottom.
  std::vector<RatVec> picked;
  for (size_t row = d; row-- > 0 && out.solve_rows.size() < k;) {
    RatVec v(k);
    for (size_t i = 0; i < k; ++i) v[i] = A.at(row, F[i]);
    auto trial = picked;
    trial.push_back(v);
    if (row_reduce(trial).size() == picked.size() + 1) {
      picked.push_back(v);
      out.solve_rows.push_back(row);
    }
  }
  if (out.solve_rows.size() < k) throw PreconditionError("torus recipe not applicable");

  // Inverse of A[S, F] by Gauss-Jordan on [A | I].
  std::vector<RatVec> aug(k, RatVec(2 * k, 0));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) aug[i][j] = picked[i][j];
    aug[i][k + i] = 1;
  }
  row_reduce(aug);
  ThetaRing ring{m, P};
  // b_row = beta_row - sum_r A[row, R_r] theta_r, with beta_row = -param_row.
  auto b = [&](size_t row) {
    LaurentPolynomial out_b = -ring.param(row);
    for (size_t r = 0; r < m; ++r)
      if (A.at(row, out.free[r]) != 0) out_b = out_b - Rational(A.at(row, out.free[r])) * ring.theta(r);
    return out_b;
  };
  // theta_{F_i} I = L_i I.
  std::vector<LaurentPolynomial> L(k, ring.zero());
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j)
      if (aug[i][k + j] != 0) L[i] = L[i] + aug[i][k + j] * b(out.solve_rows[j]);

  std::vector<LaurentPolynomial> constraints;
  for (size_t row = 0; row < d; ++row) {
    if (std::find(out.solve_rows.begin(), out.solve_rows.end(), row) != out.solve_rows.end()) continue;
    LaurentPolynomial E = b(row);
    for (size_t i = 0; i < k; ++i)
      if (A.at(row, F[i]) != 0) E = E - Rational(A.at(row, F[i])) * L[i];
    if (E.is_zero()) continue;
    constraints.push_back(E);
  }

  // d_z^u I at the specialization, as an operator in t.
  auto monomial_op = [&](const Exponent& u) {
    LaurentPolynomial q = ring.constant(1);
    Rational scale = 1;
    for (size_t i = 0; i < k; ++i) {
      int a = u[F[i]];
      // d_f^a = z_f^{-a} theta_f (theta_f - 1) ... (theta_f - a + 1).
      for (int j = 0; j < a; ++j) q = q * (L[i] - ring.constant(j));
      for (int j = 0; j < a; ++j) scale /= values[i];
    }
    Exponent w(m, 0);
    std::vector<bool> avoid(m, false);
    for (size_t r = 0; r < m; ++r) {
      w[r] = u[out.free[r]];
      avoid[r] = w[r] != 0;
      // d_z = scale^{-1} d_t for z = scale * t.
      for (int j = 0; j < w[r]; ++j) scale /= scales[r];
    }
    q = ring.reduce(q, constraints, avoid);
    WeylOperator dw(m, P);
    dw.add_term(Exponent(m, 0), w, LaurentPolynomial::constant(P, scale));
    return dw * ring.to_operator(q);
  };

  auto push_unique = [](std::vector<WeylOperator>& list, const WeylOperator& op) {
    if (op.is_zero()) return;
    WeylOperator nrm = op.normalized();
    for (const auto& o : list)
      if (o == nrm) return;
    list.push_back(nrm);
  };
  for (const auto& bin : sys.binomials) push_unique(out.binomial_ops, monomial_op(bin.u) - monomial_op(bin.v));
  for (const auto& E : constraints) push_unique(out.euler_ops, ring.to_operator(E));
  return out;
}

Rational gkz_volume(const CayleyMatrix& A) {
  std::vector<RatVec> pts;
  for (const auto& c : A.columns) pts.push_back(to_rational(IntVec(c.begin() + 1, c.end())));
  return normalized_volume(convex_hull(pts));
}

json to_json(const CayleyMatrix& A) {
  json rows = json::array();
  for (size_t r = 0; r < A.rows(); ++r) {
    json row = json::array();
    for (size_t c = 0; c < A.cols(); ++c) row.push_back(A.at(r, c));
    rows.push_back(row);
  }
  json labels = json::array();
  for (const auto& [i, a] : A.labels) labels.push_back({{"poly", i + 1}, {"exponent", a}});
  return {{"rows", rows}, {"labels", labels}, {"rank", A.rank}};
}

json to_json(const GkzSystem& sys) {
  auto names = sys.z_names();
  json bins = json::array();
  for (const auto& b : sys.binomials) {
    json j = to_json(binomial_operator(b, sys.params.size()), names, sys.params, true);
    j["u"] = b.u;
    j["v"] = b.v;
    bins.push_back(j);
  }
  json eul = json::array();
  for (const auto& op : sys.euler_ops) eul.push_back(to_json(op, names, sys.params, true));
  json out = {{"convention", "beta = -(s, nu); theta_k = z_k*d[k]"},
              {"cayley", to_json(sys.A)},
              {"params", sys.params},
              {"degree_bound", sys.degree_bound},
              {"binomials", bins},
              {"euler_operators", eul}};
  if (sys.beta) {
    json beta = json::array();
    for (const auto& z : *sys.beta) beta.push_back(parameter_json(z));
    out["beta"] = beta;
  }
  return out;
}

json to_json(const ResonanceReport& r) {
  json out = {{"nonresonant", r.nonresonant}, {"facets", r.facets}};
  if (r.witness) {
    out["witness"] = *r.witness;
    out["pairing"] = parameter_json(*r.pairing);
  }
  return out;
}

json to_json(const SpecializedSystem& s) {
  json free = json::array();
  for (size_t c : s.free) free.push_back(c + 1);
  json rows = json::array();
  for (size_t r : s.solve_rows) rows.push_back(r + 1);
  json ops = json::array();
  for (const auto& op : s.all()) ops.push_back(to_json(op, s.vars, s.params));
  return {{"free", free}, {"vars", s.vars}, {"solve_rows", rows}, {"binomial_count", s.binomial_ops.size()},
          {"operators", ops}};
}

TorusRecipe recipe_from_json(const json& j) {
  TorusRecipe r;
  for (const auto& f : j.at("fixed")) {
    long idx = f.get<long>();
    if (idx < 1) throw std::invalid_argument("fixed indices are 1-based");
    r.fixed.push_back(static_cast<size_t>(idx - 1));
  }
  if (j.contains("values"))
    for (const auto& v : j.at("values")) r.fixed_values.push_back(parse_parameter(v).re);
  if (j.contains("scales"))
    for (const auto& v : j.at("scales")) r.scales.push_back(parse_parameter(v).re);
  if (j.contains("names")) r.names = j.at("names").get<std::vector<std::string>>();
  return r;
}

}  // namespace euler
