#include "euler/spec.hpp"

#include <nlohmann/json.hpp>

namespace euler {

using nlohmann::json;

void IntegralSpec::validate() const {
  if (vars.empty()) throw PreconditionError("spec needs at least one variable");
  if (polys.empty()) throw PreconditionError("spec needs at least one polynomial");
  if (s.size() != polys.size()) throw PreconditionError("length of s must equal the number of polynomials");
  if (nu.size() != vars.size()) throw PreconditionError("length of nu must equal the number of variables");
  for (size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].nvars() != vars.size()) throw PreconditionError("polynomial in the wrong number of variables");
    if (polys[i].is_zero()) throw PreconditionError("f" + std::to_string(i + 1) + " is the zero polynomial");
    if (positive_mode && !polys[i].has_positive_coefficients())
      throw PreconditionError("f" + std::to_string(i + 1) + " has a non-positive coefficient in positive mode");
  }
}

bool IntegralSpec::real_parameters() const {
  for (const auto& z : s)
    if (!z.is_real()) return false;
  for (const auto& z : nu)
    if (!z.is_real()) return false;
  return true;
}

RatVec IntegralSpec::re_s() const {
  RatVec v;
  for (const auto& z : s) v.push_back(z.re);
  return v;
}

RatVec IntegralSpec::re_nu() const {
  RatVec v;
  for (const auto& z : nu) v.push_back(z.re);
  return v;
}

std::vector<cplx> IntegralSpec::s_numeric() const {
  std::vector<cplx> v;
  for (const auto& z : s) v.push_back(z.to_complex());
  return v;
}

std::vector<cplx> IntegralSpec::nu_numeric() const {
  std::vector<cplx> v;
  for (const auto& z : nu) v.push_back(z.to_complex());
  return v;
}

std::vector<Polytope> IntegralSpec::newton_polytopes() const {
  std::vector<Polytope> out;
  for (const auto& f : polys) out.push_back(newton_polytope(f));
  return out;
}

IntegralSpec rescaled(const IntegralSpec& spec, const Rational& inv_delta) {
  IntegralSpec r = spec;
  for (auto& z : r.s) z = ExactComplex(z.re * inv_delta, z.im * inv_delta);
  for (auto& z : r.nu) z = ExactComplex(z.re * inv_delta, z.im * inv_delta);
  return r;
}

Polytope parametric_polytope(const IntegralSpec& spec) {
  RatVec w = spec.re_s();
  for (const auto& x : w)
    if (x <= 0) throw PreconditionError("Re(s_i) must be positive");
  return weighted_sum(spec.newton_polytopes(), w);
}

namespace {

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(BigInt(j.get<long long>()));
  if (j.is_number()) return rational_from_double(j.get<double>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_array() && j.size() == 2) {
    auto part = [](const json& x) {
      if (x.is_string()) return BigInt(x.get<std::string>());
      if (x.is_number_integer()) return BigInt(x.get<long long>());
      throw std::invalid_argument("rational parts must be integers");
    };
    BigInt den = part(j[1]);
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(part(j[0]), den);
  }
  throw std::invalid_argument("cannot read a number from " + j.dump());
}

json rational_pair(const Rational& q) {
  auto small = [](const BigInt& b) -> json {
    if (abs(b) < BigInt(1) << 62) return b.convert_to<long long>();
    return b.str();
  };
  return json::array({small(numerator_of(q)), small(denominator_of(q))});
}

}  // namespace

ExactComplex parse_parameter(const json& j) {
  if (j.is_object()) {
    Rational re = j.contains("re") ? rational_from_json(j.at("re")) : Rational(0);
    Rational im = j.contains("im") ? rational_from_json(j.at("im")) : Rational(0);
    return {re, im};
  }
  return ExactComplex(rational_from_json(j));
}

json parameter_json(const ExactComplex& z) {
  if (z.is_real()) return rational_pair(z.re);
  return {{"re", rational_pair(z.re)}, {"im", rational_pair(z.im)}};
}

IntegralSpec spec_from_json(const json& j) {
  IntegralSpec spec;
  spec.vars = j.at("vars").get<std::vector<std::string>>();
  for (const auto& f : j.at("f")) {
    if (f.is_object()) spec.polys.push_back(polynomial_from_json(f));
    else spec.polys.push_back(parse(f.get<std::string>(), spec.vars));
  }
  if (j.contains("s"))
    for (const auto& x : j.at("s")) spec.s.push_back(parse_parameter(x));
  if (j.contains("nu"))
    for (const auto& x : j.at("nu")) spec.nu.push_back(parse_parameter(x));
  if (j.contains("mode")) {
    const auto& m = j.at("mode");
    spec.positive_mode = m.value("positive_coefficients", true);
    spec.exact_mode = m.value("exact", true);
  }
  return spec;
}

json to_json(const IntegralSpec& spec) {
  json f = json::array();
  for (const auto& p : spec.polys) f.push_back(to_string(p, spec.vars));
  json s = json::array(), nu = json::array();
  for (const auto& z : spec.s) s.push_back(parameter_json(z));
  for (const auto& z : spec.nu) nu.push_back(parameter_json(z));
  return {{"vars", spec.vars},
          {"f", f},
          {"s", s},
          {"nu", nu},
          {"mode", {{"positive_coefficients", spec.positive_mode}, {"exact", spec.exact_mode}}}};
}

}  // namespace euler
