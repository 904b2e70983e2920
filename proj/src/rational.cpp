#include "euler/rational.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace euler {

std::string to_string(const Rational& q) {
  if (denominator_of(q) == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational '" + text + "'");
  }
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite number");
  int exp = 0;
  double mant = std::frexp(x, &exp);
  // mant * 2^53 is an exact integer.
  auto m = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r{BigInt(m)};
  BigInt two_pow = 1;
  two_pow <<= std::abs(exp);
  if (exp >= 0) return r * Rational(two_pow);
  return r / Rational(two_pow);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }
bool is_integer(const Rational& q) { return denominator_of(q) == 1; }

BigInt floor_of(const Rational& q) {
  BigInt n = numerator_of(q), d = denominator_of(q);
  BigInt f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

IntVec primitive_direction(const RatVec& v) {
  BigInt lcm = 1;
  for (const auto& x : v) {
    BigInt d = denominator_of(x);
    lcm = boost::multiprecision::lcm(lcm, d);
  }
  std::vector<BigInt> ints;
  BigInt g = 0;
  for (const auto& x : v) {
    BigInt k = numerator_of(x) * (lcm / denominator_of(x));
    ints.push_back(k);
    g = boost::multiprecision::gcd(g, k);
  }
  IntVec out(v.size(), 0);
  if (g == 0) return out;
  for (size_t i = 0; i < v.size(); ++i) out[i] = (ints[i] / g).convert_to<long>();
  return out;
}

RatVec to_rational(const IntVec& v) {
  RatVec out;
  out.reserve(v.size());
  for (long x : v) out.emplace_back(x);
  return out;
}

Rational dot(const RatVec& a, const RatVec& b) {
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational dot(const IntVec& a, const RatVec& b) {
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s += Rational(a[i]) * b[i];
  return s;
}

std::string to_string(const ExactComplex& z) {
  if (z.im == 0) return to_string(z.re);
  std::string im = to_string(z.im);
  if (z.re == 0) return im + "*i";
  return to_string(z.re) + (z.im > 0 ? " + " : " - ") + to_string(abs(z.im)) + "*i";
}

}  // namespace euler
