#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace kam {

template <class Real>
using Complex = std::complex<Real>;

template <class Real>
inline constexpr Real kPi = std::numbers::pi_v<Real>;

/// Point {t,u} of su(2): the matrix [[i t, u], [-conj(u), -i t]].
/// Coordinates (t, Re u, Im u) are orthonormal for the basis (h, j, ij).
template <class Real>
struct Algebra {
  Real t = 0;
  Complex<Real> u{0, 0};

  static Algebra h() { return {1, {0, 0}}; }
  static Algebra j() { return {0, {1, 0}}; }
  static Algebra ij() { return {0, {0, 1}}; }

  Real norm() const { return std::sqrt(t * t + std::norm(u)); }

  Algebra& operator+=(const Algebra& o) {
    t += o.t;
    u += o.u;
    return *this;
  }
  Algebra& operator-=(const Algebra& o) {
    t -= o.t;
    u -= o.u;
    return *this;
  }
  Algebra& operator*=(Real s) {
    t *= s;
    u *= s;
    return *this;
  }
  friend Algebra operator+(Algebra a, const Algebra& b) { return a += b; }
  friend Algebra operator-(Algebra a, const Algebra& b) { return a -= b; }
  friend Algebra operator*(Real s, Algebra a) { return a *= s; }
  friend Algebra operator-(Algebra a) { return a *= Real(-1); }
};

/// Point {z,w} of SU(2): the matrix [[z, w], [-conj(w), conj(z)]].
template <class Real>
struct Su2 {
  Complex<Real> z{1, 0};
  Complex<Real> w{0, 0};

  static Su2 identity() { return {}; }
  static Su2 minus_identity() { return {{-1, 0}, {0, 0}}; }
  /// The diagonal element {e^{2 i pi a}, 0}.
  static Su2 diagonal(Real a) { return {std::polar(Real(1), 2 * kPi<Real> * a), {0, 0}}; }

  Real norm_defect() const { return std::abs(std::norm(z) + std::norm(w) - Real(1)); }
};

template <class Real>
Su2<Real> compose(const Su2<Real>& a, const Su2<Real>& b);

template <class Real>
Su2<Real> inverse(const Su2<Real>& s);

template <class Real>
Su2<Real> renormalized(const Su2<Real>& s);

/// Frobenius-type distance sqrt(|z1-z2|^2 + |w1-w2|^2).
template <class Real>
Real distance(const Su2<Real>& a, const Su2<Real>& b);

template <class Real>
Su2<Real> exp_map(const Algebra<Real>& s);

/// Principal logarithm, norm in [0, pi). Throws AntipodeError within 1e-9 of -Id.
template <class Real>
Algebra<Real> log_map(const Su2<Real>& s);

template <class Real>
Algebra<Real> bracket(const Algebra<Real>& a, const Algebra<Real>& b);

template <class Real>
Real inner(const Algebra<Real>& a, const Algebra<Real>& b);

/// Ad(S).s = S s S^{-1}.
template <class Real>
Algebra<Real> adjoint_action(const Su2<Real>& S, const Algebra<Real>& s);

template <class Real>
Su2<Real> operator*(const Su2<Real>& a, const Su2<Real>& b) {
  return compose(a, b);
}

}  // namespace kam
