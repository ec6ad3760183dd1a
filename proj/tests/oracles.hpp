#pragma once

// Reference implementations that share no code with the library: plain 2x2 complex
// matrices, power series, brute-force scans and direct coefficient sums.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "su2kam/su2.hpp"

namespace oracle {

using cd = std::complex<double>;
using Mat2 = std::array<cd, 4>;  // row-major

inline constexpr double pi = 3.14159265358979323846;

inline Mat2 mat(const kam::Su2<double>& s) { return {s.z, s.w, -std::conj(s.w), std::conj(s.z)}; }

inline Mat2 mat(const kam::Algebra<double>& a) {
  const cd i(0, 1);
  return {i * a.t, a.u, -std::conj(a.u), -i * a.t};
}

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 add(const Mat2& a, const Mat2& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

inline Mat2 scale(cd s, const Mat2& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }

inline Mat2 adjoint(const Mat2& a) { return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}; }

inline Mat2 identity() { return {1, 0, 0, 1}; }

inline double dist(const Mat2& a, const Mat2& b) {
  double m = 0;
  for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]));
  return m;
}

/// exp by scaling and squaring of a truncated power series.
inline Mat2 expm(const Mat2& a) {
  double n = 0;
  for (const auto& x : a) n = std::max(n, std::abs(x));
  int squarings = 0;
  while (n > 0.5) {
    n /= 2;
    ++squarings;
  }
  const Mat2 small = scale(std::ldexp(1.0, -squarings), a);
  Mat2 term = identity(), sum = identity();
  for (int k = 1; k < 30; ++k) {
    term = scale(1.0 / k, mul(term, small));
    sum = add(sum, term);
  }
  for (int i = 0; i < squarings; ++i) sum = mul(sum, sum);
  return sum;
}

/// Coordinates (t, Re u, Im u) read off the matrix [[i t, u], [-conj u, -i t]].
inline std::array<double, 3> coords(const Mat2& m) { return {m[0].imag(), m[1].real(), m[1].imag()}; }

inline std::array<double, 3> coords(const kam::Algebra<double>& a) { return {a.t, a.u.real(), a.u.imag()}; }

inline std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])});
}

inline double nearest_int_dist(double x) { return std::abs(x - std::floor(x + 0.5)); }

/// min over 0 < |k| <= K of |k|^tau |k alpha - c|_Z, d = 1.
struct Scan {
  long long k = 0;
  double margin = 0;
};

inline Scan scan_margin(double alpha, double c, double tau, long long K) {
  Scan best{0, 1e300};
  for (long long k = -K; k <= K; ++k) {
    if (k == 0) continue;
    const double m = std::pow(static_cast<double>(std::llabs(k)), tau) * nearest_int_dist(static_cast<double>(k) * alpha - c);
    if (m < best.margin) best = {k, m};
  }
  return best;
}

/// sum_k (1+k^2)^s |c_k|^2 for a d = 1 coefficient list indexed from -band.
inline double sobolev(const std::vector<cd>& c, int band, double s) {
  double sum = 0;
  for (int k = -band; k <= band; ++k)
    sum += std::pow(1.0 + double(k) * k, s) * std::norm(c[static_cast<std::size_t>(k + band)]);
  return std::sqrt(sum);
}

/// Continued-fraction quotients by exact integer Euclid on p/q.
inline std::vector<long long> euclid(long long p, long long q) {
  std::vector<long long> a;
  while (q != 0) {
    a.push_back(p / q);
    const long long r = p % q;
    p = q;
    q = r;
  }
  return a;
}

/// Principal logarithm of an SU(2) matrix: theta / sin(theta) (U - cos(theta) I).
inline Mat2 logm(const Mat2& u) {
  const double c = std::clamp(u[0].real(), -1.0, 1.0);
  const double th = std::acos(c);
  const double f = th < 1e-8 ? 1.0 : th / std::sin(th);
  return scale(f, add(u, scale(-c, identity())));
}

inline double algebra_norm(const Mat2& m) { return std::sqrt(std::norm(m[0]) + std::norm(m[1])); }

}  // namespace oracle
