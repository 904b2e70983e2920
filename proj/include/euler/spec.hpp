// The integral f_1^{-s_1}...f_l^{-s_l} x^nu dx/x as a problem description.
#pragma once

#include "euler/laurent.hpp"
#include "euler/polytope.hpp"

#include <nlohmann/json_fwd.hpp>

namespace euler {

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegralSpec {
  std::vector<std::string> vars;
  std::vector<LaurentPolynomial> polys;
  std::vector<ExactComplex> s;
  std::vector<ExactComplex> nu;
  bool positive_mode = true;
  bool exact_mode = true;

  size_t n() const { return vars.size(); }
  size_t ell() const { return polys.size(); }

  // Throws PreconditionError on inconsistent shapes, zero polynomials, or
  // non-positive coefficients in positive mode.
  void validate() const;
  bool real_parameters() const;
  RatVec re_s() const;
  RatVec re_nu() const;
  std::vector<cplx> s_numeric() const;
  std::vector<cplx> nu_numeric() const;
  std::vector<Polytope> newton_polytopes() const;
};

// Spec with s and nu scaled by 1/delta (the integrand raised to 1/delta).
IntegralSpec rescaled(const IntegralSpec& spec, const Rational& inv_delta);

// P(s) = sum Re(s_i) Delta(f_i).
Polytope parametric_polytope(const IntegralSpec& spec);

// Accepts a number (converted exactly), "p/q", [num, den], or {"re": .., "im": ..}.
ExactComplex parse_parameter(const nlohmann::json& j);
nlohmann::json parameter_json(const ExactComplex& z);

IntegralSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const IntegralSpec& spec);

}  // namespace euler
