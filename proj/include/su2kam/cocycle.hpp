#pragma once

#include <optional>
#include <vector>

#include "su2kam/fourier.hpp"
#include "su2kam/group_map.hpp"
#include "su2kam/su2.hpp"

namespace kam {

/// Angle normalized into (-1/2, 1/2].
template <class Real>
Real normalize_angle(Real a) {
  Real r = a - std::round(a);
  if (r <= Real(-0.5)) r += 1;
  return r;
}

/// (alpha, A e^{F(.)}) with A = {e^{2 i pi a}, 0}; ||F||_0 < 1 is checked on construction.
template <class Real>
class PerturbedCocycle {
 public:
  PerturbedCocycle(std::vector<Real> alpha, Real angle, AlgebraMap<Real> F);

  const std::vector<Real>& alpha() const { return alpha_; }
  int dim() const { return static_cast<int>(alpha_.size()); }
  Real angle() const { return angle_; }
  Su2<Real> A() const { return Su2<Real>::diagonal(angle_); }
  const AlgebraMap<Real>& F() const { return F_; }

 private:
  std::vector<Real> alpha_;
  Real angle_;
  AlgebraMap<Real> F_;
};

template <class Real>
struct GeneralCocycle {
  std::vector<Real> alpha;
  GroupMap<Real> A;

  int dim() const { return static_cast<int>(alpha.size()); }
};

template <class Real>
GeneralCocycle<Real> to_general(const PerturbedCocycle<Real>& c);

/// The quasiperiodic product A_n(.) as a factored map.
template <class Real>
GroupMap<Real> iterate(const GeneralCocycle<Real>& c, int n);

/// Conj_B(c) = (alpha, B(. + alpha) A(.) B^{-1}(.)).
template <class Real>
GeneralCocycle<Real> conjugate(const GroupMap<Real>& B, const GeneralCocycle<Real>& c);

/// (alpha, D^{-1}(. + alpha) A_d D(.)), so that Conj_D of the result is (alpha, A_d).
template <class Real>
GeneralCocycle<Real> plant_reducible(std::vector<Real> alpha, const Su2<Real>& A_d, const GroupMap<Real>& D);

template <class Real>
struct PerturbedForm {
  PerturbedCocycle<Real> cocycle;
  /// Constant P with Conj_P(input) = cocycle.
  Su2<Real> P;
  Real tail = 0;  // spectral mass of log(A^* A(.)) beyond the analysis band
};

/// Writes a close-to-constant cocycle as Conj_P of (alpha, A e^F) with A diagonal.
/// Requires ||log(Abar^* A(.))||_0 < 0.5 for the grid-mean constant Abar.
template <class Real>
PerturbedForm<Real> to_perturbed(const GeneralCocycle<Real>& c, int band, int oversampling = 3);

template <class Real>
struct ReducibilityGap {
  Real g1 = 0;  // ||log(A_n^* Conj_{B_n}(c)(.))||_0
  Real g2 = 0;  // ||Ad(B_n(.)) F_n(.)||_0
};

template <class Real>
ReducibilityGap<Real> almost_reducibility_gap(const GeneralCocycle<Real>& c, const GroupMap<Real>& B_n,
                                              const Su2<Real>& A_n, int points);

/// P with P A P^* = {e^{2 i pi a}, 0}, a in [0, 1/2].
template <class Real>
struct Diagonalization {
  Su2<Real> P;
  Real angle;
};

template <class Real>
Diagonalization<Real> diagonalize_constant(const Su2<Real>& A);

/// Largest distance between two sampled maps.
template <class Real>
Real max_distance(const std::vector<Su2<Real>>& a, const std::vector<Su2<Real>>& b);

}  // namespace kam
