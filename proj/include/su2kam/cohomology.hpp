#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "su2kam/arithmetic.hpp"
#include "su2kam/fourier.hpp"

namespace kam {

inline constexpr double kDivisorUnderflow = 1e-14;

template <class Real>
struct SolveReport {
  int band = 0;                   // band of the solution series
  std::vector<Freq> excluded;     // modes deliberately left unsolved: {0} or {k_r}
  std::size_t solved_modes = 0;
  Complex<Real> obstruction{0, 0};  // F_t^(0) or F_z^(k_r)
  Real min_divisor = 0;
  Freq min_divisor_k;
  Real residual = 0;  // max |divisor Y^(k) + F^(k)| over the solved set
  Real solution_norm0 = 0;
  Real input_norm0 = 0;
  /// ||Y||_0 / (scale N^{exponent + d/2} ||F||_0), the bounded ratio tracked across sweeps.
  Real estimate_ratio = 0;
  std::optional<Freq> k_r;
  bool window_violation = false;
  std::vector<std::string> warnings;
};

template <class Real>
struct Solution {
  ScalarSeries<Real> Y;
  SolveReport<Real> report;
};

/// Y_t(. + alpha) - Y_t(.) = -T'_N F_t(.), mean excluded.
template <class Real>
Solution<Real> solve_diagonal(const ScalarSeries<Real>& F_t, std::span<const Real> alpha, int N,
                              Real gamma = Real(1), Real tau = Real(2));

struct TwistedOptions {
  double gamma = 1 / 0.38;
  double tau = 2;
  double C = 1;  // K >= C gamma N^tau is required
  double nu = 3;
};

/// e^{-4 i pi a} Y_z(. + alpha) - Y_z(.) = -T^{k_r}_{2N} F_z(.), with k_r from find_resonance.
template <class Real>
Solution<Real> solve_twisted(const ScalarSeries<Real>& F_z, Real a, std::span<const Real> alpha, int N, Real K,
                             const TwistedOptions& opts = {});

}  // namespace kam
