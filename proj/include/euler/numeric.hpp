// Scalar traits and small dense linear algebra shared by the numeric kernels.
#pragma once

#include "euler/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>
#include <complex>
#include <vector>

namespace euler {

using real50 = boost::multiprecision::cpp_bin_float_50;
using cplx50 = boost::multiprecision::cpp_complex_50;

template <class C>
struct Scalar;

template <>
struct Scalar<cplx> {
  using real = double;
  static cplx from(const ExactComplex& z) { return z.to_complex(); }
  static cplx from(const Rational& q) { return to_double(q); }
  static double abs(const cplx& z) { return std::abs(z); }
  static cplx to_cplx(const cplx& z) { return z; }
};

template <>
struct Scalar<cplx50> {
  using real = real50;
  static real50 real_from(const Rational& q) {
    return real50(numerator_of(q).str()) / real50(denominator_of(q).str());
  }
  static cplx50 from(const ExactComplex& z) { return cplx50(real_from(z.re), real_from(z.im)); }
  static cplx50 from(const Rational& q) { return cplx50(real_from(q)); }
  static real50 abs(const cplx50& z) { return boost::multiprecision::abs(z); }
  static cplx to_cplx(const cplx50& z) {
    return {z.real().template convert_to<double>(), z.imag().template convert_to<double>()};
  }
};

inline cplx50 lift(const cplx& z) { return cplx50(real50(z.real()), real50(z.imag())); }

// Solves A x = b by Gaussian elimination with partial pivoting. Returns false
// when a pivot vanishes.
template <class C>
bool solve_linear(std::vector<std::vector<C>> A, std::vector<C> b, std::vector<C>& x) {
  using S = Scalar<C>;
  const size_t n = b.size();
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    auto best = S::abs(A[c][c]);
    for (size_t r = c + 1; r < n; ++r)
      if (S::abs(A[r][c]) > best) {
        best = S::abs(A[r][c]);
        p = r;
      }
    if (best == 0) return false;
    std::swap(A[p], A[c]);
    std::swap(b[p], b[c]);
    for (size_t r = c + 1; r < n; ++r) {
      C f = A[r][c] / A[c][c];
      if (f == C(0)) continue;
      for (size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, C(0));
  for (size_t i = n; i-- > 0;) {
    C s = b[i];
    for (size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
    x[i] = s / A[i][i];
  }
  return true;
}

template <class C>
C determinant(std::vector<std::vector<C>> A) {
  using S = Scalar<C>;
  const size_t n = A.size();
  C det = C(1);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    auto best = S::abs(A[c][c]);
    for (size_t r = c + 1; r < n; ++r)
      if (S::abs(A[r][c]) > best) {
        best = S::abs(A[r][c]);
        p = r;
      }
    if (best == 0) return C(0);
    if (p != c) {
      std::swap(A[p], A[c]);
      det = -det;
    }
    det *= A[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      C f = A[r][c] / A[c][c];
      for (size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
    }
  }
  return det;
}

template <class C>
auto max_norm(const std::vector<C>& v) {
  typename Scalar<C>::real m = 0;
  for (const auto& x : v) {
    auto a = Scalar<C>::abs(x);
    if (a > m) m = a;
  }
  return m;
}

}  // namespace euler
