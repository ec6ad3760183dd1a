#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "su2kam/arithmetic.hpp"
#include "su2kam/cocycle.hpp"
#include "su2kam/kam_driver.hpp"
#include "su2kam/random.hpp"

namespace kam {

/// Random map with coefficients amplitude * decay^{|k|_inf} * (uniform in the unit square, centered)
/// on |k|_inf <= band; the t-channel stays real.
template <class Real>
AlgebraMap<Real> random_algebra_map(int dim, int band, double amplitude, double decay, Rng& rng);

// ---------------------------------------------------------------------------
// Rigidity

template <class Real>
struct Plant {
  GroupMap<Real> D;
  GeneralCocycle<Real> cocycle;  // (alpha, D^{-1}(.+alpha) A_d D(.))
  PerturbedForm<Real> form;
  Real scale = 1;                // D = exp(scale * Y)
  Real eps0 = 0;
};

/// Plants (alpha, A_d) behind D = exp(s Y). With a target, s is tuned so that ||F||_0 of the
/// perturbed form equals eps_target (secant iteration, relative accuracy 1e-12).
template <class Real>
Plant<Real> make_plant(const std::vector<Real>& alpha, Real a_d, const AlgebraMap<Real>& Y,
                       std::optional<Real> eps_target, int band, int oversampling);

template <class Real>
struct RigidityOutcome {
  explicit RigidityOutcome(Plant<Real> p) : plant(std::move(p)) {}

  bool pass = false;
  DcReport<Real> dc;
  Plant<Real> plant;
  SchemeTrace<Real> trace;
  int planted_resonances = 0;
  bool decay = false;
  std::vector<Real> N_prime;      // (2 gamma_inv)^{1/tau} N_{n_i}^{nu/tau} at each resonant step
  bool scales_grow = true;        // N_i' / N_{n_i} > 1 for every resonant step
};

/// Verdict: status converged or max_steps, resonant steps <= planted_resonances, and
/// eps_{n+1} <= eps_n^1.5 from step 2 on. Throws PreconditionError when 2 a_d fails dc_alpha_check.
template <class Real>
RigidityOutcome<Real> rigidity_experiment(const std::vector<Real>& alpha, Real a_d, const DiophParams<Real>& dc_alpha,
                                          const AlgebraMap<Real>& plant_exponent, std::optional<Real> eps_target,
                                          int planted_resonances, const SchemeParams& params);

template <class Real>
bool rigidity_verdict(const RigidityOutcome<Real>& out, double floor);

// ---------------------------------------------------------------------------
// Liouville cascade

/// Resonance window N^{nu/l} < |k| < N of the l-th planted resonance.
struct ResonanceWindow {
  double lower = 0;
  double upper = 0;

  bool contains(const Freq& k) const { return k.max_norm() > lower && k.max_norm() < upper; }
};

ResonanceWindow resonance_window(int N, double nu, int l);

/// Per-step resonance pattern of the unperturbed constant: the scheme's resonance search and
/// reduction applied to (alpha, {e^{2 i pi a}, 0}) with zero obstruction.
template <class Real>
struct ResonancePattern {
  std::vector<std::optional<Freq>> k;   // step n at index n-1
  std::vector<Real> slack;              // |1 - K |k alpha - 2a|_Z| relative to the 1/K threshold
  std::vector<Real> angles;             // angle entering each step
};

template <class Real>
ResonancePattern<Real> simulate_resonances(Real a, std::span<const Real> alpha, const SchemeParams& params, int steps);

struct CascadeOptions {
  int min_k = 2;              // planted resonances need |k_l|_inf >= min_k
  double min_margin = 0.05;   // every step keeps this relative slack to the 1/K threshold
  long long max_samples = 50'000'000;
};

template <class Real>
struct CascadePlan {
  Real angle = 0;
  std::vector<int> steps;
  std::vector<Freq> k;        // predicted resonant mode at each planted step
  Real margin = 0;            // smallest relative slack over all steps of the horizon
  long long samples = 0;
};

/// Initial angle a in [0, 1/2] whose unperturbed resonance pattern over `horizon` steps is
/// exactly `steps`, found by nested refinement: the admissible set at step n is scanned with
/// resolution 0.05/K_n inside the admissible set of step n-1. Returns the sample with the
/// largest margin, or nothing when the pattern is infeasible.
template <class Real>
std::optional<CascadePlan<Real>> plan_cascade(std::span<const Real> alpha, const SchemeParams& params,
                                              const std::vector<int>& steps, int horizon,
                                              const CascadeOptions& opts = {});

template <class Real>
struct LiouvilleOutcome {
  bool pass = false;
  CascadePlan<Real> plan;
  SchemeTrace<Real> trace;
  CascadePlan<Real> control_plan;
  SchemeTrace<Real> control;
  std::vector<int> missed;       // planted steps without the predicted resonance
  std::vector<int> unexpected;   // resonant steps that were not planted
  std::vector<ResonanceWindow> windows;
  std::vector<bool> in_window;
};

/// Runs the scheme from a planned cascade angle and from a resonance-free control angle, both
/// with perturbation F. PASS iff every planted resonance is detected with its predicted mode and
/// the control run has none. Throws PreconditionError when no angle realizes the pattern.
template <class Real>
LiouvilleOutcome<Real> liouville_experiment(const std::vector<Real>& alpha, const std::vector<int>& steps,
                                            const AlgebraMap<Real>& F, const SchemeParams& params,
                                            const CascadeOptions& opts = {});

template <class Real>
bool liouville_verdict(const LiouvilleOutcome<Real>& out);

// ---------------------------------------------------------------------------
// Conjugacies between constants

struct ConjugacySupport {
  std::vector<Freq> minus;  // |k.alpha + c1 - c2|_Z < tol
  std::vector<Freq> plus;   // |k.alpha + c1 + c2|_Z < tol

  bool empty() const { return minus.empty() && plus.empty(); }
};

/// Frequencies |k|_inf <= K_max that can carry a Fourier mode of a conjugacy between the
/// diagonal constants C1 and C2. Throws PreconditionError for non-diagonal input.
template <class Real>
ConjugacySupport constant_conjugacy_support(const Su2<Real>& C1, const Su2<Real>& C2, std::span<const Real> alpha,
                                            int K_max, Real tol);

struct ToyCase {
  double c1 = 0, c2 = 0;
  std::optional<Freq> planted;
  bool plus = false;        // pairing of the planted mode
  ConjugacySupport found;
  bool ok = false;
};

struct ToyOutcome {
  bool pass = false;
  std::vector<ToyCase> planted;
  std::vector<ToyCase> generic;
  int planted_ok = 0;
  int generic_ok = 0;
};

/// `cases` planted pairs c2 = +-(c1 + k0.alpha) and `cases` generic pairs, every draw re-drawn
/// until all non-planted pairings stay 10 tol away from resonance.
template <class Real>
ToyOutcome toy_experiment(std::span<const Real> alpha, int K_max, Real tol, int cases, std::uint64_t seed);

}  // namespace kam
