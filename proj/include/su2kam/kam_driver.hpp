#pragma once

#include <string>
#include <utility>
#include <vector>

#include "su2kam/cocycle.hpp"
#include "su2kam/kam_step.hpp"

namespace kam {

struct SchemeParams {
  int N1 = 10;
  double sigma = 0.3;
  double nu = 3;  // tau + 1
  double gamma_inv = 0.38;
  double tau = 2;
  double C = 1;
  int s0 = 8;
  double eps_gate = 0.05;
  int max_steps = 8;
  int min_steps = 1;  // convergence on the floor is only declared from this step on
  int oversampling = 3;
  int precision = 53;
  double floor = 1e-13;
  double normal_form_tol = 1e-8;
  double c10 = 1e-20;
  int band = 64;
  int max_band = 1024;
  long long dc_horizon = 10000;
  bool measure_aliasing = true;
  bool track_conjugacy = true;

  void validate() const;
  StepParams step_params(int n) const;
};

/// (N_n, K_n) = (round(N1^{(1+sigma)^{n-1}}), N_n^nu); throws once N_n exceeds 1e6.
std::pair<int, double> schedule(const SchemeParams& params, int n);

enum class SchemeStatus { Converged, Diverged, GateFailed, MaxSteps, Aborted };

std::string to_string(SchemeStatus s);

template <class Real>
struct SchemeTrace {
  std::vector<StepReport<Real>> steps;
  std::vector<Real> angles;          // angle of A_{n+1} after step n
  std::vector<int> resonant_steps;   // 1-based indices of steps with a resonant mode
  std::vector<Real> gap_g1;          // almost-reducibility gaps per step
  std::vector<Real> gap_g2;
  std::vector<Real> conjugacy_defect;  // |Conj_{H_n}(c) - A_{n+1} e^{F_{n+1}}| on the grid
  Real eps0_initial = 0;
  Real eps_s0_initial = 0;
  Real lambda = 0;
  SchemeStatus status = SchemeStatus::MaxSteps;
  std::string message;
  std::vector<std::string> warnings;
  GroupMap<Real> H;                  // G_n ... G_1
  GroupMap<Real> resonance_product;  // (C B)_{n_last} ... (C B)_{n_1}
  std::vector<AlgebraMap<Real>> Y;   // smooth parts per step
};

template <class Real>
SchemeTrace<Real> run_scheme(const PerturbedCocycle<Real>& c, const SchemeParams& params);

/// eps_{n+1} <= eps_n^exponent (or at the floor) for every step n >= 2.
template <class Real>
bool decay_holds(const SchemeTrace<Real>& trace, double exponent, double floor);

template <class Real>
struct NormalFormReport {
  GroupMap<Real> D;
  SchemeTrace<Real> rerun;
  std::vector<Real> y_norms;
  Real max_y_norm = 0;
};

/// D = R^{-1} H for the converged run; re-running on Conj_D(c) must only produce
/// smooth parts below the normal-form tolerance. Throws VerificationFailure otherwise.
template <class Real>
NormalFormReport<Real> normal_form_extract(const PerturbedCocycle<Real>& c, const SchemeParams& params);

}  // namespace kam
