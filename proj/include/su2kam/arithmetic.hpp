#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "su2kam/lattice.hpp"

namespace kam {

/// Distance to the nearest integer, in [0, 1/2].
template <class Real>
Real frac_dist(Real x) {
  return std::abs(x - std::round(x));
}

/// |k.alpha - c|_Z >= gamma_inv / |k|^tau checked for 0 < |k|_inf <= K_max.
template <class Real>
struct DiophParams {
  Real gamma_inv = Real(0.38);
  Real tau = 2;
  long long K_max = 10000;

  Real gamma() const { return 1 / gamma_inv; }
};

struct Convergent {
  long long p;
  long long q;
};

template <class Real>
struct ContinuedFraction {
  std::vector<long long> quotients;   // a_1..a_n
  std::vector<Real> gauss_orbit;      // G^0(alpha)..G^{n-1}(alpha)
  std::vector<Convergent> convergents;  // p_k/q_k, k = 1..n
};

/// Throws RationalInput when a partial quotient would exceed 1e12 (alpha rational at working precision).
template <class Real>
ContinuedFraction<Real> continued_fraction(Real alpha, int n);

/// Value of [0; a_1, a_2, ...] for the periodic quotient list a, repeated until convergence.
template <class Real>
Real alpha_from_periodic_cf(std::span<const long long> quotients);

/// Value of the finite continued fraction [0; a_1, ..., a_n].
template <class Real>
Real alpha_from_finite_cf(std::span<const long long> quotients);

template <class Real>
Real golden_mean() {
  const long long one[] = {1};
  return alpha_from_periodic_cf<Real>(one);
}

template <class Real>
struct DcReport {
  bool pass = true;
  Freq worst_k;
  /// min over scanned k of |k|^tau |k.alpha - c|_Z; the check passes iff this is >= gamma_inv.
  Real margin = 0;
  long long horizon = 0;
};

template <class Real>
DcReport<Real> dc_check(std::span<const Real> alpha, const DiophParams<Real>& params);

/// |k.alpha - c|_Z >= gamma_inv / |k|^tau for the constant c (taken literally, not doubled).
template <class Real>
DcReport<Real> dc_alpha_check(Real c, std::span<const Real> alpha, const DiophParams<Real>& params);

/// Number of the first n_max Gauss iterates of alpha that pass dc_check (a finite witness, not a proof).
template <class Real>
int rdc_witness_count(Real alpha, const DiophParams<Real>& params, int n_max);

template <class Real>
struct Resonance {
  std::optional<Freq> k_r;
  Freq nearest;
  Real distance = 0;  // |nearest.alpha - 2a|_Z
  int candidates = 0;  // number of |k| <= N below 1/K
  bool window_violation = false;
  std::vector<std::string> warnings;
};

/// Minimizer of |k.alpha - 2a|_Z over |k|_inf <= N, reported as resonant when below 1/K.
/// Ties are broken by distance then |k|; a second sub-1/K mode within |k - k_r| <= 2N is flagged.
template <class Real>
Resonance<Real> find_resonance(Real a, std::span<const Real> alpha, int N, Real K);

/// Calls fn(k) for every k with |k|_inf <= radius, in lexicographic order.
template <class Fn>
void for_each_in_ball(int dim, int radius, Fn&& fn) {
  const FreqBox box(dim, radius);
  for (std::size_t i = 0; i < box.size(); ++i) fn(box.freq(i));
}

}  // namespace kam
