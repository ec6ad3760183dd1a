#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "su2kam/lattice.hpp"
#include "su2kam/su2.hpp"

namespace kam {

enum class Channel { Real, Complex };

/// Coefficients k -> c_k on the cube |k|_inf <= band; evaluates to sum c_k e^{2 i pi k.x}.
/// The Real channel keeps c_{-k} = conj(c_k).
template <class Real>
class ScalarSeries {
 public:
  ScalarSeries() : ScalarSeries(1, 0, Channel::Complex) {}
  ScalarSeries(int dim, int band, Channel channel)
      : dim_(dim), band_(band), channel_(channel), coeffs_(FreqBox(dim, band).size()) {}

  int dim() const { return dim_; }
  int band() const { return band_; }
  Channel channel() const { return channel_; }
  FreqBox box() const { return FreqBox(dim_, band_); }
  std::size_t size() const { return coeffs_.size(); }

  const std::vector<Complex<Real>>& coeffs() const { return coeffs_; }
  std::vector<Complex<Real>>& coeffs() { return coeffs_; }

  Complex<Real> coeff(const Freq& k) const {
    if (k.max_norm() > band_) return {0, 0};
    return coeffs_[box().index(k)];
  }
  /// Sets c_k; on the Real channel also sets c_{-k} = conj(c_k).
  void set(const Freq& k, Complex<Real> value);

  /// Same function represented on a different band (zero padding or truncation).
  ScalarSeries with_band(int band) const;
  void enforce_hermitian();

  Complex<Real> evaluate(std::span<const Real> x) const;
  /// x -> f(x + alpha).
  ScalarSeries shifted(std::span<const Real> alpha) const;
  /// Spectral derivative of multi-order `order` (componentwise non-negative).
  ScalarSeries derivative(const Freq& order) const;
  Real max_abs_coeff() const;

  ScalarSeries& operator+=(const ScalarSeries& o);
  ScalarSeries& operator-=(const ScalarSeries& o);
  ScalarSeries& operator*=(Real s);
  friend ScalarSeries operator+(ScalarSeries a, const ScalarSeries& b) { return a += b; }
  friend ScalarSeries operator-(ScalarSeries a, const ScalarSeries& b) { return a -= b; }
  friend ScalarSeries operator*(Real s, ScalarSeries a) { return a *= s; }

 private:
  int dim_;
  int band_;
  Channel channel_;
  std::vector<Complex<Real>> coeffs_;
};

/// U = {U_t, U_z}: real t-channel and complex z-channel, sharing one band.
template <class Real>
struct AlgebraMap {
  ScalarSeries<Real> t;
  ScalarSeries<Real> z;

  AlgebraMap() : AlgebraMap(1, 0) {}
  AlgebraMap(int dim, int band) : t(dim, band, Channel::Real), z(dim, band, Channel::Complex) {}
  AlgebraMap(ScalarSeries<Real> t_, ScalarSeries<Real> z_);

  int dim() const { return t.dim(); }
  int band() const { return t.band(); }

  Algebra<Real> evaluate(std::span<const Real> x) const;
  AlgebraMap shifted(std::span<const Real> alpha) const { return {t.shifted(alpha), z.shifted(alpha)}; }
  AlgebraMap with_band(int band) const { return {t.with_band(band), z.with_band(band)}; }
  bool is_zero() const { return t.max_abs_coeff() == 0 && z.max_abs_coeff() == 0; }

  AlgebraMap& operator+=(const AlgebraMap& o) {
    *this = AlgebraMap(t + o.t, z + o.z);
    return *this;
  }
  friend AlgebraMap operator+(AlgebraMap a, const AlgebraMap& b) { return a += b; }
  friend AlgebraMap operator-(const AlgebraMap& a, const AlgebraMap& b) { return {a.t - b.t, a.z - b.z}; }
  friend AlgebraMap operator*(Real s, const AlgebraMap& a) { return {s * a.t, s * a.z}; }
};

enum class TruncMode { Full, Dotted, Centered };

/// Frequency set kept by truncate(): Full |k| <= N, Dotted 0 < |k| <= N,
/// Centered 0 < |k - center| <= 2N (Full when no center is given).
bool in_truncation(const Freq& k, int N, TruncMode mode, const std::optional<Freq>& center = std::nullopt);

template <class Real>
ScalarSeries<Real> truncate(const ScalarSeries<Real>& f, int N, TruncMode mode,
                            const std::optional<Freq>& center = std::nullopt);

/// Complement of truncate(): standard keeps |k| > N, centered keeps |k - center| > 2N or k = center.
/// truncate(f, N, mode, c) + rest(f, N, mode, c) == f for every mode.
template <class Real>
ScalarSeries<Real> rest(const ScalarSeries<Real>& f, int N, TruncMode mode = TruncMode::Full,
                        const std::optional<Freq>& center = std::nullopt);

template <class Real>
std::vector<Freq> spectral_support(const ScalarSeries<Real>& f, Real threshold = Real(1e-13));

/// Absolute coefficient level below which sampled data is indistinguishable from rounding.
template <class Real>
Real rounding_level() {
  return 4 * std::numeric_limits<Real>::epsilon();
}

/// Copy with every coefficient of modulus <= threshold set to zero. Spectral derivatives of
/// sampled data amplify rounding noise by (2 pi |k|)^s, so C^s diagnostics use this first.
template <class Real>
ScalarSeries<Real> without_noise(const ScalarSeries<Real>& f, Real threshold = rounding_level<Real>());
template <class Real>
AlgebraMap<Real> without_noise(const AlgebraMap<Real>& f, Real threshold = rounding_level<Real>());

/// sqrt(sum (1+|k|^2)^s |c_k|^2), |k| Euclidean.
template <class Real>
Real sobolev_norm(const ScalarSeries<Real>& f, Real s);
template <class Real>
Real sobolev_norm(const AlgebraMap<Real>& f, Real s);

/// max over |beta| <= s of the grid maximum of |d^beta f|; s must be a non-negative integer.
template <class Real>
Real cs_norm(const ScalarSeries<Real>& f, Real s);
template <class Real>
Real cs_norm(const AlgebraMap<Real>& f, Real s);
/// C^s norm of a C^2-valued map given by two component series (used for SU(2)-valued maps).
template <class Real>
Real cs_norm_pair(const ScalarSeries<Real>& a, const ScalarSeries<Real>& b, Real s);

/// Uniform grid x_j = j/M in each of d directions; row-major, axis 0 slowest.
template <class Real>
class SpectralGrid {
 public:
  SpectralGrid(int dim, int points);

  int dim() const { return dim_; }
  int points() const { return points_; }
  std::size_t size() const { return size_; }
  /// Largest band this grid can hold without aliasing under quadratic products.
  int safe_band() const { return (points_ - 1) / 3; }
  int resolvable_band() const { return (points_ - 1) / 2; }

  std::vector<Real> point(std::size_t idx) const;

  std::vector<Complex<Real>> synthesize(const ScalarSeries<Real>& f) const;
  std::vector<Algebra<Real>> synthesize(const AlgebraMap<Real>& f) const;

  /// Requires points >= 3 band + 1, else UndersampledGrid.
  ScalarSeries<Real> analyze(const std::vector<Complex<Real>>& values, int band, Channel channel) const;
  AlgebraMap<Real> analyze(const std::vector<Algebra<Real>>& values, int band) const;
  /// Analysis on the full resolvable band; no oversampling requirement (diagnostics only).
  ScalarSeries<Real> analyze_full(const std::vector<Complex<Real>>& values, Channel channel) const;
  AlgebraMap<Real> analyze_full(const std::vector<Algebra<Real>>& values) const;

 private:
  ScalarSeries<Real> analyze_band(const std::vector<Complex<Real>>& values, int band, Channel channel) const;

  int dim_;
  int points_;
  std::size_t size_;
  std::vector<Complex<Real>> roots_;
};

extern template class ScalarSeries<double>;
extern template class ScalarSeries<long double>;
extern template struct AlgebraMap<double>;
extern template struct AlgebraMap<long double>;
extern template class SpectralGrid<double>;
extern template class SpectralGrid<long double>;

}  // namespace kam
