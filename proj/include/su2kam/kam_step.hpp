#pragma once

#include <optional>
#include <string>
#include <vector>

#include "su2kam/cocycle.hpp"
#include "su2kam/cohomology.hpp"
#include "su2kam/group_map.hpp"

namespace kam {

struct StepParams {
  int N = 10;
  double K = 1000;
  double gamma = 1 / 0.38;
  double tau = 2;
  double nu = 3;
  double C = 1;             // K >= C gamma N^tau
  int s0 = 8;
  double c10 = 1e-20;       // gate constant in c10 K N^s0 eps0 < 1
  double floor = 1e-13;     // the gate is not enforced once eps0 is at this level
  int band = 64;            // minimum band of F'
  int max_band = 1024;
  int oversampling = 3;
  bool measure_aliasing = true;
};

/// Result of moving the obstruction-perturbed constant back to a diagonal constant:
/// conjugation by P C(.) B(.) turns (alpha, A exp(obstruction e^{2 i pi k_r .})) into
/// (alpha, {e^{2 i pi angle}, 0}).
template <class Real>
struct Reduction {
  std::optional<Freq> k_r;
  bool has_B = false;
  bool has_C = false;
  Freq delta;                 // parity vector of the C geodesic
  Algebra<Real> direction;    // unit direction of the C geodesic
  Su2<Real> A_tilde;          // B(alpha) A exp(obstruction)
  Su2<Real> P;
  Real angle = 0;
  GroupMap<Real> factor;      // P C B
};

template <class Real>
Reduction<Real> reduce_constant(Real a, std::span<const Real> alpha, const std::optional<Freq>& k_r,
                                const Algebra<Real>& obstruction);

template <class Real>
struct StepReport {
  int N = 0;
  Real K = 0;
  std::optional<Freq> k_r;
  Real resonance_distance = 0;
  Algebra<Real> obstruction;  // {F_t^(0), F_z^(k_r)}
  Real eps0_before = 0, eps_s0_before = 0;
  Real eps0_after = 0, eps_s0_after = 0;
  Real normY0 = 0;
  Real normG0 = 0;
  Real normGs0 = 0;
  Real c10_fit = 0;
  Real c20_fit = 0;
  Real aliasing = 0;
  Real tail = 0;
  Real identity_residual = 0;
  Real gate = 0;
  Real ratio_t = 0;
  Real ratio_z = 0;
  Real min_divisor = 0;
  int band_after = 0;
  bool has_B = false;
  bool has_C = false;
  Freq parity_B;
  Freq parity_C;
  Real angle_before = 0;
  Real angle_after = 0;
  std::vector<std::string> warnings;
};

template <class Real>
struct StepResult {
  GroupMap<Real> G;
  GroupMap<Real> resonance_part;  // C B, empty without resonance
  AlgebraMap<Real> Y;
  PerturbedCocycle<Real> next;
  StepReport<Real> report;
};

/// One conjugation G(. + alpha) A e^{F} G^*(.) = A' e^{F'} with F' taken from the grid identity.
template <class Real>
StepResult<Real> conjugation_step(const PerturbedCocycle<Real>& c, const StepParams& params);

/// Relative L2 mass of half-integer frequencies in x -> G(x), sampled over [0,2)^d.
/// Zero for 1-periodic maps.
template <class Real>
Real half_integer_content(const GroupMap<Real>& G, int points);

}  // namespace kam
