#include "su2kam/su2.hpp"

#include <array>

#include "su2kam/errors.hpp"

namespace kam {

namespace {

template <class Real>
using Mat2 = std::array<std::array<Complex<Real>, 2>, 2>;

template <class Real>
Mat2<Real> mul(const Mat2<Real>& a, const Mat2<Real>& b) {
  Mat2<Real> c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

template <class Real>
Mat2<Real> as_matrix(const Su2<Real>& s) {
  return {{{s.z, s.w}, {-std::conj(s.w), std::conj(s.z)}}};
}

template <class Real>
Mat2<Real> as_matrix(const Algebra<Real>& s) {
  const Complex<Real> it(0, s.t);
  return {{{it, s.u}, {-std::conj(s.u), -it}}};
}

}  // namespace

template <class Real>
Su2<Real> compose(const Su2<Real>& a, const Su2<Real>& b) {
  Su2<Real> r{a.z * b.z - a.w * std::conj(b.w), a.z * b.w + a.w * std::conj(b.z)};
  return renormalized(r);
}

template <class Real>
Su2<Real> inverse(const Su2<Real>& s) {
  return {std::conj(s.z), -s.w};
}

template <class Real>
Su2<Real> renormalized(const Su2<Real>& s) {
  const Real n = std::sqrt(std::norm(s.z) + std::norm(s.w));
  return {s.z / n, s.w / n};
}

template <class Real>
Real distance(const Su2<Real>& a, const Su2<Real>& b) {
  return std::sqrt(std::norm(a.z - b.z) + std::norm(a.w - b.w));
}

template <class Real>
Su2<Real> exp_map(const Algebra<Real>& s) {
  const Real r = s.norm();
  Real sinc;
  if (r < Real(1e-4)) {
    const Real r2 = r * r;
    sinc = 1 - r2 / 6 + r2 * r2 / 120;
  } else {
    sinc = std::sin(r) / r;
  }
  return {Complex<Real>(std::cos(r), s.t * sinc), s.u * sinc};
}

template <class Real>
Algebra<Real> log_map(const Su2<Real>& s) {
  if (distance(s, Su2<Real>::minus_identity()) < Real(1e-9))
    throw AntipodeError("log_map: element within 1e-9 of -Id has no principal logarithm");
  const Real c = s.z.real();
  const Real sn = std::sqrt(s.z.imag() * s.z.imag() + std::norm(s.w));
  const Real r = std::atan2(sn, c);
  Real factor;
  if (r < Real(1e-4)) {
    const Real r2 = r * r;
    factor = 1 + r2 / 6 + 7 * r2 * r2 / 360;
  } else {
    factor = r / sn;
  }
  return {s.z.imag() * factor, s.w * factor};
}

template <class Real>
Algebra<Real> bracket(const Algebra<Real>& a, const Algebra<Real>& b) {
  const Real a1 = a.t, a2 = a.u.real(), a3 = a.u.imag();
  const Real b1 = b.t, b2 = b.u.real(), b3 = b.u.imag();
  return {2 * (a2 * b3 - a3 * b2), Complex<Real>(2 * (a3 * b1 - a1 * b3), 2 * (a1 * b2 - a2 * b1))};
}

template <class Real>
Real inner(const Algebra<Real>& a, const Algebra<Real>& b) {
  return a.t * b.t + a.u.real() * b.u.real() + a.u.imag() * b.u.imag();
}

template <class Real>
Algebra<Real> adjoint_action(const Su2<Real>& S, const Algebra<Real>& s) {
  const Mat2<Real> m = mul(mul(as_matrix(S), as_matrix(s)), as_matrix(inverse(S)));
  return {m[0][0].imag(), m[0][1]};
}

#define KAM_INSTANTIATE_SU2(R)                                         \
  template Su2<R> compose(const Su2<R>&, const Su2<R>&);               \
  template Su2<R> inverse(const Su2<R>&);                              \
  template Su2<R> renormalized(const Su2<R>&);                         \
  template R distance(const Su2<R>&, const Su2<R>&);                   \
  template Su2<R> exp_map(const Algebra<R>&);                          \
  template Algebra<R> log_map(const Su2<R>&);                          \
  template Algebra<R> bracket(const Algebra<R>&, const Algebra<R>&);   \
  template R inner(const Algebra<R>&, const Algebra<R>&);              \
  template Algebra<R> adjoint_action(const Su2<R>&, const Algebra<R>&);

KAM_INSTANTIATE_SU2(double)
KAM_INSTANTIATE_SU2(long double)

}  // namespace kam
