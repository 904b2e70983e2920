// Exact rational scalars and helpers shared by every module.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <string>
#include <vector>

namespace euler {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;
using RatVec = std::vector<Rational>;
using IntVec = std::vector<long>;
using Exponent = std::vector<int>;
using cplx = std::complex<double>;

// "p" or "p/q" with q > 0.
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);
// Doubles are dyadic rationals; the conversion is exact.
Rational rational_from_double(double x);
double to_double(const Rational& q);

BigInt numerator_of(const Rational& q);
BigInt denominator_of(const Rational& q);
bool is_integer(const Rational& q);
BigInt floor_of(const Rational& q);

// Scale a rational vector to the primitive integer vector on the same ray.
// The zero vector maps to itself.
IntVec primitive_direction(const RatVec& v);
RatVec to_rational(const IntVec& v);
Rational dot(const RatVec& a, const RatVec& b);
Rational dot(const IntVec& a, const RatVec& b);

// Complex parameter with exact rational parts (s_i, nu_j).
struct ExactComplex {
  Rational re{0};
  Rational im{0};
  ExactComplex() = default;
  ExactComplex(Rational r) : re(std::move(r)) {}
  ExactComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  bool is_real() const { return im == 0; }
  cplx to_complex() const { return {to_double(re), to_double(im)}; }
  friend bool operator==(const ExactComplex&, const ExactComplex&) = default;
};

std::string to_string(const ExactComplex& z);

}  // namespace euler
