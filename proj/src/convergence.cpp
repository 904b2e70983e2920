#include "euler/convergence.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace euler {

using nlohmann::json;

RatVec facet_weights(const std::vector<LaurentPolynomial>& polys, const IntVec& r) {
  RatVec w;
  for (const auto& f : polys) {
    bool first = true;
    long best = 0;
    for (const auto& e : f.support()) {
      long v = 0;
      for (size_t j = 0; j < e.size(); ++j) v += r[j] * e[j];
      if (first || v < best) best = v;
      first = false;
    }
    w.emplace_back(best);
  }
  return w;
}

ConvergenceReport check_convergence(const IntegralSpec& spec) {
  spec.validate();
  ConvergenceReport rep;
  RatVec s = spec.re_s(), nu = spec.re_nu();
  bool s_ok = std::all_of(s.begin(), s.end(), [](const Rational& x) { return x > 0; });
  if (!s_ok) {
    rep.reasons.push_back("nonpositive_s");
    return rep;
  }
  Polytope P = weighted_sum(spec.newton_polytopes(), s);
  rep.polytope = P;
  if (!P.full_dimensional()) {
    rep.reasons.push_back("degenerate_polytope");
    return rep;
  }
  for (const auto& f : P.facets()) {
    Rational slack = dot(f.normal, nu) - f.offset;
    if (slack <= 0) rep.violated.push_back({{f.normal, facet_weights(spec.polys, f.normal)}, slack});
  }
  bool outside = std::any_of(rep.violated.begin(), rep.violated.end(), [](const auto& v) { return v.slack < 0; });
  if (outside) rep.reasons.push_back("outside");
  else if (!rep.violated.empty()) {
    rep.boundary = true;
    rep.reasons.push_back("boundary");
  }
  rep.converges = rep.violated.empty();
  return rep;
}

GammaSkeleton gamma_skeleton(const std::vector<LaurentPolynomial>& polys) {
  if (polys.empty()) throw PreconditionError("gamma_skeleton needs at least one polynomial");
  const size_t ell = polys.size(), n = polys[0].nvars();
  std::vector<IntVec> cols;
  for (size_t i = 0; i < ell; ++i) {
    if (polys[i].is_zero()) throw PreconditionError("zero polynomial");
    for (const auto& e : polys[i].support()) {
      IntVec c(ell + n, 0);
      c[i] = 1;
      for (size_t j = 0; j < n; ++j) c[ell + j] = e[j];
      cols.push_back(c);
    }
  }
  std::vector<IntVec> normals;
  try {
    normals = cone_facets(cols);
  } catch (const std::invalid_argument&) {
    throw PreconditionError("the Minkowski sum of the Newton polytopes is not full-dimensional");
  }
  GammaSkeleton sk;
  for (const auto& nr : normals) {
    IntVec r(nr.begin() + ell, nr.end());
    if (std::all_of(r.begin(), r.end(), [](long x) { return x == 0; })) continue;
    long g = 0;
    for (long x : r) g = std::gcd(g, std::abs(x));
    for (auto& x : r) x /= g;
    RatVec w;
    for (size_t i = 0; i < ell; ++i) w.emplace_back(Rational(-nr[i]) / g);
    sk.factors.push_back({r, w});
  }
  std::sort(sk.factors.begin(), sk.factors.end(),
            [](const GammaFactor& a, const GammaFactor& b) { return a.r > b.r; });

  // cross-check against P(s) at a few positive weights
  std::mt19937 rng(20240611u);
  std::uniform_int_distribution<int> num(1, 40), den(1, 13);
  std::vector<Polytope> newton;
  for (const auto& f : polys) newton.push_back(newton_polytope(f));
  for (int trial = 0; trial < 3; ++trial) {
    RatVec s;
    for (size_t i = 0; i < ell; ++i) s.push_back(Rational(num(rng), den(rng)));
    Polytope P = weighted_sum(newton, s);
    std::set<std::pair<IntVec, Rational>> want, got;
    for (const auto& f : P.facets()) want.insert({f.normal, f.offset});
    for (const auto& g : sk.factors) got.insert({g.r, dot(g.w, s)});
    if (want != got) throw NumericError("Cayley facets disagree with the weighted Minkowski sum");
  }
  return sk;
}

namespace {

std::string linear_text(const std::vector<std::pair<Rational, std::string>>& terms) {
  std::string out;
  for (const auto& [c, name] : terms) {
    if (c == 0) continue;
    Rational a = abs(c);
    std::string body = a == 1 ? name : to_string(a) + "*" + name;
    if (out.empty()) out = (c < 0 ? "-" : "") + body;
    else out += (c < 0 ? " - " : " + ") + body;
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string gamma_text(const GammaFactor& g) {
  std::vector<std::pair<Rational, std::string>> terms;
  for (size_t j = 0; j < g.r.size(); ++j)
    terms.emplace_back(Rational(g.r[j]), g.r.size() == 1 ? "nu" : "nu" + std::to_string(j + 1));
  for (size_t i = 0; i < g.w.size(); ++i)
    terms.emplace_back(-g.w[i], g.w.size() == 1 ? "s" : "s" + std::to_string(i + 1));
  return "Gamma(" + linear_text(terms) + ")";
}

std::string gamma_text(const GammaSkeleton& g) {
  std::string out;
  for (const auto& f : g.factors) out += (out.empty() ? "" : " * ") + gamma_text(f);
  return out;
}

json to_json(const GammaSkeleton& g) {
  json a = json::array();
  for (const auto& f : g.factors) a.push_back({{"r", f.r}, {"w", rational_vector_json(f.w)}, {"text", gamma_text(f)}});
  return {{"factors", a}, {"product", gamma_text(g)}};
}

json to_json(const ConvergenceReport& r) {
  json v = json::array();
  for (const auto& f : r.violated)
    v.push_back({{"r", f.facet.r}, {"w", rational_vector_json(f.facet.w)}, {"slack", to_string(f.slack)}});
  json out = {{"converges", r.converges}, {"boundary", r.boundary}, {"reasons", r.reasons}, {"violated_facets", v}};
  if (r.polytope) out["polytope"] = to_json(*r.polytope);
  return out;
}

}  // namespace euler
