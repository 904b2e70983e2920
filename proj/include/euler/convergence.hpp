// Absolute convergence over the positive orthant and the Gamma-factor skeleton.
#pragma once

#include "euler/spec.hpp"

#include <optional>

namespace euler {

// Gamma(r·nu - w·s).
struct GammaFactor {
  IntVec r;
  RatVec w;
  friend bool operator==(const GammaFactor&, const GammaFactor&) = default;
};

struct GammaSkeleton {
  std::vector<GammaFactor> factors;
};

struct ViolatedFacet {
  GammaFactor facet;
  Rational slack;  // r·Re(nu) - w·Re(s) <= 0
};

struct ConvergenceReport {
  bool converges = false;
  bool boundary = false;
  std::vector<std::string> reasons;  // nonpositive_s, degenerate_polytope, outside, boundary
  std::optional<Polytope> polytope;  // P(s) when Re(s) > 0
  std::vector<ViolatedFacet> violated;
};

// w_i = min over supp(f_i) of r·alpha, so that r·p >= w·s is the facet of P(s).
RatVec facet_weights(const std::vector<LaurentPolynomial>& polys, const IntVec& r);

ConvergenceReport check_convergence(const IntegralSpec& spec);
GammaSkeleton gamma_skeleton(const std::vector<LaurentPolynomial>& polys);

std::string gamma_text(const GammaFactor& g);
std::string gamma_text(const GammaSkeleton& g);

nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const GammaSkeleton& g);

}  // namespace euler
