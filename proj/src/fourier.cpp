#include "su2kam/fourier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "su2kam/errors.hpp"

namespace kam {

template <class Real>
void ScalarSeries<Real>::set(const Freq& k, Complex<Real> value) {
  if (k.dim() != dim_) throw PreconditionError("frequency dimension mismatch");
  if (k.max_norm() > band_) throw PreconditionError("frequency " + k.to_string() + " outside band");
  const FreqBox b = box();
  if (channel_ == Channel::Real) {
    if (k.is_zero()) value = {value.real(), 0};
    coeffs_[b.index(-k)] = std::conj(value);
  }
  coeffs_[b.index(k)] = value;
}

template <class Real>
ScalarSeries<Real> ScalarSeries<Real>::with_band(int band) const {
  ScalarSeries out(dim_, band, channel_);
  const FreqBox src = box();
  const FreqBox dst = out.box();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Freq k = src.freq(i);
    if (k.max_norm() <= band) out.coeffs_[dst.index(k)] = coeffs_[i];
  }
  return out;
}

template <class Real>
void ScalarSeries<Real>::enforce_hermitian() {
  if (channel_ != Channel::Real) return;
  const FreqBox b = box();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::size_t j = b.index(-b.freq(i));
    if (j < i) continue;
    const Complex<Real> avg = (coeffs_[i] + std::conj(coeffs_[j])) / Real(2);
    coeffs_[i] = avg;
    coeffs_[j] = std::conj(avg);
  }
}

template <class Real>
Complex<Real> ScalarSeries<Real>::evaluate(std::span<const Real> x) const {
  const FreqBox b = box();
  Complex<Real> sum{0, 0};
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (coeffs_[i] == Complex<Real>(0, 0)) continue;
    const Real phase = 2 * kPi<Real> * dot<Real>(b.freq(i), x);
    sum += coeffs_[i] * std::polar(Real(1), phase);
  }
  if (channel_ == Channel::Real) return {sum.real(), 0};
  return sum;
}

template <class Real>
ScalarSeries<Real> ScalarSeries<Real>::shifted(std::span<const Real> alpha) const {
  ScalarSeries out = *this;
  const FreqBox b = box();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Real phase = 2 * kPi<Real> * dot<Real>(b.freq(i), alpha);
    out.coeffs_[i] *= std::polar(Real(1), phase);
  }
  out.enforce_hermitian();
  return out;
}

template <class Real>
ScalarSeries<Real> ScalarSeries<Real>::derivative(const Freq& order) const {
  ScalarSeries out = *this;
  const FreqBox b = box();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Freq k = b.freq(i);
    Complex<Real> factor{1, 0};
    for (int a = 0; a < dim_; ++a)
      for (int p = 0; p < order[a]; ++p) factor *= Complex<Real>(0, 2 * kPi<Real> * k[a]);
    out.coeffs_[i] *= factor;
  }
  return out;
}

template <class Real>
Real ScalarSeries<Real>::max_abs_coeff() const {
  Real m = 0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

template <class Real>
ScalarSeries<Real>& ScalarSeries<Real>::operator+=(const ScalarSeries& o) {
  if (o.dim_ != dim_) throw PreconditionError("series dimension mismatch");
  if (o.channel_ == Channel::Complex) channel_ = Channel::Complex;
  if (o.band_ > band_) *this = with_band(o.band_);
  const FreqBox b = box();
  const FreqBox ob = o.box();
  for (std::size_t i = 0; i < ob.size(); ++i) coeffs_[b.index(ob.freq(i))] += o.coeffs_[i];
  return *this;
}

template <class Real>
ScalarSeries<Real>& ScalarSeries<Real>::operator-=(const ScalarSeries& o) {
  ScalarSeries neg = o;
  neg *= Real(-1);
  return *this += neg;
}

template <class Real>
ScalarSeries<Real>& ScalarSeries<Real>::operator*=(Real s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

template <class Real>
AlgebraMap<Real>::AlgebraMap(ScalarSeries<Real> t_, ScalarSeries<Real> z_) {
  if (t_.dim() != z_.dim()) throw PreconditionError("channel dimension mismatch");
  if (t_.channel() != Channel::Real) throw PreconditionError("t-channel must be real-valued");
  const int band = std::max(t_.band(), z_.band());
  t = t_.band() == band ? std::move(t_) : t_.with_band(band);
  z = z_.band() == band ? std::move(z_) : z_.with_band(band);
  if (z.channel() != Channel::Complex) {
    ScalarSeries<Real> zc(z.dim(), band, Channel::Complex);
    zc.coeffs() = z.coeffs();
    z = std::move(zc);
  }
}

template <class Real>
Algebra<Real> AlgebraMap<Real>::evaluate(std::span<const Real> x) const {
  return {t.evaluate(x).real(), z.evaluate(x)};
}

bool in_truncation(const Freq& k, int N, TruncMode mode, const std::optional<Freq>& center) {
  switch (mode) {
    case TruncMode::Full:
      return k.max_norm() <= N;
    case TruncMode::Dotted:
      return !k.is_zero() && k.max_norm() <= N;
    case TruncMode::Centered:
      if (!center) return k.max_norm() <= N;
      {
        const int d = (k - *center).max_norm();
        return d > 0 && d <= 2 * N;
      }
  }
  return false;
}

namespace {

template <class Real>
ScalarSeries<Real> filter(const ScalarSeries<Real>& f, const std::function<bool(const Freq&)>& keep) {
  ScalarSeries<Real> out(f.dim(), f.band(), f.channel());
  const FreqBox b = f.box();
  for (std::size_t i = 0; i < b.size(); ++i)
    if (keep(b.freq(i))) out.coeffs()[i] = f.coeffs()[i];
  return out;
}

void for_each_order(int dim, int total, const std::function<void(const Freq&)>& fn) {
  Freq order(dim);
  std::function<void(int, int)> rec = [&](int axis, int remaining) {
    if (axis == dim) {
      fn(order);
      return;
    }
    for (int p = 0; p <= remaining; ++p) {
      order[axis] = p;
      rec(axis + 1, remaining - p);
    }
  };
  rec(0, total);
}

int cs_order(double s) {
  if (s < 0 || std::floor(s) != s) throw PreconditionError("C^s norm needs a non-negative integer s");
  return static_cast<int>(s);
}

int cs_grid_points(int band) { return 4 * band + 5; }

}  // namespace

template <class Real>
ScalarSeries<Real> truncate(const ScalarSeries<Real>& f, int N, TruncMode mode, const std::optional<Freq>& center) {
  if (N < 0) throw PreconditionError("truncate: N must be non-negative");
  return filter(f, [&](const Freq& k) { return in_truncation(k, N, mode, center); });
}

template <class Real>
ScalarSeries<Real> rest(const ScalarSeries<Real>& f, int N, TruncMode mode, const std::optional<Freq>& center) {
  if (N < 0) throw PreconditionError("rest: N must be non-negative");
  return filter(f, [&](const Freq& k) { return !in_truncation(k, N, mode, center); });
}

template <class Real>
ScalarSeries<Real> without_noise(const ScalarSeries<Real>& f, Real threshold) {
  ScalarSeries<Real> out = f;
  for (auto& c : out.coeffs())
    if (std::abs(c) <= threshold) c = {0, 0};
  return out;
}

template <class Real>
AlgebraMap<Real> without_noise(const AlgebraMap<Real>& f, Real threshold) {
  return {without_noise(f.t, threshold), without_noise(f.z, threshold)};
}

template <class Real>
std::vector<Freq> spectral_support(const ScalarSeries<Real>& f, Real threshold) {
  std::vector<Freq> out;
  const FreqBox b = f.box();
  for (std::size_t i = 0; i < b.size(); ++i)
    if (std::abs(f.coeffs()[i]) > threshold) out.push_back(b.freq(i));
  return out;
}

template <class Real>
Real sobolev_norm(const ScalarSeries<Real>& f, Real s) {
  const FreqBox b = f.box();
  Real sum = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Real w = std::pow(1 + static_cast<Real>(b.freq(i).sq_norm()), s);
    sum += w * std::norm(f.coeffs()[i]);
  }
  return std::sqrt(sum);
}

template <class Real>
Real sobolev_norm(const AlgebraMap<Real>& f, Real s) {
  return std::hypot(sobolev_norm(f.t, s), sobolev_norm(f.z, s));
}

template <class Real>
Real cs_norm(const ScalarSeries<Real>& f, Real s) {
  const int order = cs_order(static_cast<double>(s));
  const SpectralGrid<Real> grid(f.dim(), cs_grid_points(f.band()));
  Real best = 0;
  for_each_order(f.dim(), order, [&](const Freq& beta) {
    for (const auto& v : grid.synthesize(f.derivative(beta))) best = std::max(best, std::abs(v));
  });
  return best;
}

template <class Real>
Real cs_norm_pair(const ScalarSeries<Real>& a, const ScalarSeries<Real>& b, Real s) {
  const int order = cs_order(static_cast<double>(s));
  const SpectralGrid<Real> grid(a.dim(), cs_grid_points(std::max(a.band(), b.band())));
  Real best = 0;
  for_each_order(a.dim(), order, [&](const Freq& beta) {
    const auto va = grid.synthesize(a.derivative(beta));
    const auto vb = grid.synthesize(b.derivative(beta));
    for (std::size_t i = 0; i < va.size(); ++i) best = std::max(best, std::sqrt(std::norm(va[i]) + std::norm(vb[i])));
  });
  return best;
}

template <class Real>
Real cs_norm(const AlgebraMap<Real>& f, Real s) {
  return cs_norm_pair(f.t, f.z, s);
}

template <class Real>
SpectralGrid<Real>::SpectralGrid(int dim, int points) : dim_(dim), points_(points) {
  if (points < 1) throw PreconditionError("grid needs at least one point per direction");
  Freq check(dim);
  size_ = 1;
  for (int i = 0; i < dim; ++i) size_ *= static_cast<std::size_t>(points);
  roots_.resize(static_cast<std::size_t>(points));
  for (int m = 0; m < points; ++m)
    roots_[static_cast<std::size_t>(m)] = std::polar(Real(1), 2 * kPi<Real> * Real(m) / Real(points));
}

template <class Real>
std::vector<Real> SpectralGrid<Real>::point(std::size_t idx) const {
  std::vector<Real> x(static_cast<std::size_t>(dim_));
  for (int a = dim_ - 1; a >= 0; --a) {
    x[static_cast<std::size_t>(a)] = Real(idx % static_cast<std::size_t>(points_)) / Real(points_);
    idx /= static_cast<std::size_t>(points_);
  }
  return x;
}

namespace {

/// One-dimensional DFT along `axis` of a row-major tensor. Input position i carries
/// the integer label in_label(i), output position o carries out_label(o); the kernel is
/// e^{sign 2 i pi in_label out_label / M}.
template <class Real>
std::vector<Complex<Real>> transform_axis(const std::vector<Complex<Real>>& in, std::array<int, kMaxDim>& shape,
                                          int dim, int axis, int out_len, int in_offset, int out_offset, int sign,
                                          const std::vector<Complex<Real>>& roots) {
  const long long M = static_cast<long long>(roots.size());
  const int in_len = shape[static_cast<std::size_t>(axis)];
  std::size_t outer = 1, inner = 1;
  for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(shape[static_cast<std::size_t>(a)]);
  for (int a = axis + 1; a < dim; ++a) inner *= static_cast<std::size_t>(shape[static_cast<std::size_t>(a)]);
  std::vector<Complex<Real>> out(outer * static_cast<std::size_t>(out_len) * inner);
  std::vector<Complex<Real>> column(static_cast<std::size_t>(in_len));
  for (std::size_t p = 0; p < outer; ++p) {
    for (std::size_t q = 0; q < inner; ++q) {
      for (int i = 0; i < in_len; ++i)
        column[static_cast<std::size_t>(i)] = in[(p * static_cast<std::size_t>(in_len) + static_cast<std::size_t>(i)) * inner + q];
      for (int o = 0; o < out_len; ++o) {
        const long long lo = o - out_offset;
        Complex<Real> acc{0, 0};
        for (int i = 0; i < in_len; ++i) {
          long long idx = (sign * lo * (i - in_offset)) % M;
          if (idx < 0) idx += M;
          acc += column[static_cast<std::size_t>(i)] * roots[static_cast<std::size_t>(idx)];
        }
        out[(p * static_cast<std::size_t>(out_len) + static_cast<std::size_t>(o)) * inner + q] = acc;
      }
    }
  }
  shape[static_cast<std::size_t>(axis)] = out_len;
  return out;
}

}  // namespace

template <class Real>
std::vector<Complex<Real>> SpectralGrid<Real>::synthesize(const ScalarSeries<Real>& f) const {
  if (f.dim() != dim_) throw PreconditionError("grid/series dimension mismatch");
  if (f.band() > resolvable_band())
    throw UndersampledGrid("synthesis of band " + std::to_string(f.band()) + " on " + std::to_string(points_) +
                           " points");
  std::array<int, kMaxDim> shape{};
  for (int a = 0; a < dim_; ++a) shape[static_cast<std::size_t>(a)] = 2 * f.band() + 1;
  std::vector<Complex<Real>> data = f.coeffs();
  for (int a = 0; a < dim_; ++a) data = transform_axis(data, shape, dim_, a, points_, f.band(), 0, 1, roots_);
  if (f.channel() == Channel::Real)
    for (auto& v : data) v = {v.real(), 0};
  return data;
}

template <class Real>
std::vector<Algebra<Real>> SpectralGrid<Real>::synthesize(const AlgebraMap<Real>& f) const {
  const auto t = synthesize(f.t);
  const auto z = synthesize(f.z);
  std::vector<Algebra<Real>> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = {t[i].real(), z[i]};
  return out;
}

template <class Real>
ScalarSeries<Real> SpectralGrid<Real>::analyze_band(const std::vector<Complex<Real>>& values, int band,
                                                    Channel channel) const {
  if (values.size() != size_) throw PreconditionError("sample count does not match grid");
  std::array<int, kMaxDim> shape{};
  for (int a = 0; a < dim_; ++a) shape[static_cast<std::size_t>(a)] = points_;
  std::vector<Complex<Real>> data = values;
  for (int a = 0; a < dim_; ++a) data = transform_axis(data, shape, dim_, a, 2 * band + 1, 0, band, -1, roots_);
  const Real scale = Real(1) / static_cast<Real>(size_);
  ScalarSeries<Real> out(dim_, band, channel);
  for (std::size_t i = 0; i < data.size(); ++i) out.coeffs()[i] = data[i] * scale;
  out.enforce_hermitian();
  return out;
}

template <class Real>
ScalarSeries<Real> SpectralGrid<Real>::analyze(const std::vector<Complex<Real>>& values, int band,
                                               Channel channel) const {
  if (points_ < 3 * band + 1)
    throw UndersampledGrid("analysis of band " + std::to_string(band) + " needs at least " +
                           std::to_string(3 * band + 1) + " points, grid has " + std::to_string(points_));
  return analyze_band(values, band, channel);
}

template <class Real>
AlgebraMap<Real> SpectralGrid<Real>::analyze(const std::vector<Algebra<Real>>& values, int band) const {
  std::vector<Complex<Real>> t(values.size()), z(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    t[i] = {values[i].t, 0};
    z[i] = values[i].u;
  }
  return {analyze(t, band, Channel::Real), analyze(z, band, Channel::Complex)};
}

template <class Real>
ScalarSeries<Real> SpectralGrid<Real>::analyze_full(const std::vector<Complex<Real>>& values, Channel channel) const {
  return analyze_band(values, resolvable_band(), channel);
}

template <class Real>
AlgebraMap<Real> SpectralGrid<Real>::analyze_full(const std::vector<Algebra<Real>>& values) const {
  std::vector<Complex<Real>> t(values.size()), z(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    t[i] = {values[i].t, 0};
    z[i] = values[i].u;
  }
  return {analyze_full(t, Channel::Real), analyze_full(z, Channel::Complex)};
}

template class ScalarSeries<double>;
template class ScalarSeries<long double>;
template struct AlgebraMap<double>;
template struct AlgebraMap<long double>;
template class SpectralGrid<double>;
template class SpectralGrid<long double>;

#define KAM_INSTANTIATE_FOURIER(R)                                                                           \
  template ScalarSeries<R> truncate(const ScalarSeries<R>&, int, TruncMode, const std::optional<Freq>&);     \
  template ScalarSeries<R> rest(const ScalarSeries<R>&, int, TruncMode, const std::optional<Freq>&);         \
  template std::vector<Freq> spectral_support(const ScalarSeries<R>&, R);                                    \
  template ScalarSeries<R> without_noise(const ScalarSeries<R>&, R);                                         \
  template AlgebraMap<R> without_noise(const AlgebraMap<R>&, R);                                    \
  template R sobolev_norm(const ScalarSeries<R>&, R);                                                        \
  template R sobolev_norm(const AlgebraMap<R>&, R);                                                          \
  template R cs_norm(const ScalarSeries<R>&, R);                                                             \
  template R cs_norm(const AlgebraMap<R>&, R);                                                               \
  template R cs_norm_pair(const ScalarSeries<R>&, const ScalarSeries<R>&, R);

KAM_INSTANTIATE_FOURIER(double)
KAM_INSTANTIATE_FOURIER(long double)

}  // namespace kam
