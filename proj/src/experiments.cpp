#include "su2kam/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "su2kam/errors.hpp"

namespace kam {

template <class Real>
AlgebraMap<Real> random_algebra_map(int dim, int band, double amplitude, double decay, Rng& rng) {
  AlgebraMap<Real> F(dim, band);
  const FreqBox box(dim, band);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Freq k = box.freq(i);
    const Real scale = Real(amplitude) * std::pow(Real(decay), Real(k.max_norm()));
    const Real zr = Real(rng.uniform(-1, 1)), zi = Real(rng.uniform(-1, 1));
    F.z.set(k, scale * Complex<Real>(zr, zi));
    // first non-zero component positive: one representative per conjugate pair
    int lead = 0;
    for (int a = 0; a < dim && lead == 0; ++a) lead = k[a];
    if (k.is_zero()) {
      F.t.set(k, Complex<Real>(scale * Real(rng.uniform(-1, 1)), 0));
    } else if (lead > 0) {
      const Real tr = Real(rng.uniform(-1, 1)), ti = Real(rng.uniform(-1, 1));
      F.t.set(k, scale * Complex<Real>(tr, ti));
    }
  }
  return F;
}

// ---------------------------------------------------------------------------

namespace {

template <class Real>
Plant<Real> plant_at(const std::vector<Real>& alpha, Real a_d, const AlgebraMap<Real>& Y, Real s, int band,
                     int oversampling) {
  const int dim = static_cast<int>(alpha.size());
  GroupMap<Real> D = Y.is_zero() ? GroupMap<Real>(dim) : GroupMap<Real>::exponential(s * Y);
  GeneralCocycle<Real> cocycle = plant_reducible(alpha, Su2<Real>::diagonal(a_d), D);
  PerturbedForm<Real> form = to_perturbed(cocycle, band, oversampling);
  const Real eps0 = cs_norm(form.cocycle.F(), Real(0));
  return Plant<Real>{std::move(D), std::move(cocycle), std::move(form), s, eps0};
}

}  // namespace

template <class Real>
Plant<Real> make_plant(const std::vector<Real>& alpha, Real a_d, const AlgebraMap<Real>& Y,
                       std::optional<Real> eps_target, int band, int oversampling) {
  if (!eps_target || Y.is_zero()) {
    if (eps_target && *eps_target > 0) throw PreconditionError("cannot scale a trivial plant to a positive eps0");
    return plant_at(alpha, a_d, Y, Real(1), band, oversampling);
  }
  const Real target = *eps_target;
  if (!(target > 0)) throw PreconditionError("plant eps0 target must be positive");
  Real s0 = target / (4 * cs_norm(Y, Real(0)));
  Plant<Real> p0 = plant_at(alpha, a_d, Y, s0, band, oversampling);
  Real s1 = s0 * target / p0.eps0;
  Plant<Real> p1 = plant_at(alpha, a_d, Y, s1, band, oversampling);
  for (int it = 0; it < 60; ++it) {
    if (std::abs(p1.eps0 - target) <= Real(1e-12) * target) return p1;
    const Real slope = (p1.eps0 - p0.eps0) / (s1 - s0);
    if (!(slope != 0)) break;
    const Real s2 = s1 - (p1.eps0 - target) / slope;
    p0 = std::move(p1);
    s0 = s1;
    s1 = s2;
    p1 = plant_at(alpha, a_d, Y, s1, band, oversampling);
  }
  throw PreconditionError("plant scaling to eps0 = " + std::to_string(static_cast<double>(target)) +
                          " did not converge");
}

template <class Real>
bool rigidity_verdict(const RigidityOutcome<Real>& out, double floor) {
  const auto& tr = out.trace;
  const bool finished = tr.status == SchemeStatus::Converged || tr.status == SchemeStatus::MaxSteps;
  return finished && static_cast<int>(tr.resonant_steps.size()) <= out.planted_resonances &&
         decay_holds(tr, 1.5, floor) && out.scales_grow;
}

template <class Real>
RigidityOutcome<Real> rigidity_experiment(const std::vector<Real>& alpha, Real a_d, const DiophParams<Real>& dc_alpha,
                                          const AlgebraMap<Real>& plant_exponent, std::optional<Real> eps_target,
                                          int planted_resonances, const SchemeParams& params) {
  params.validate();
  const DcReport<Real> dc = dc_alpha_check<Real>(2 * a_d, alpha, dc_alpha);
  if (!dc.pass)
    throw PreconditionError("constant angle fails dc_alpha_check at k=" + dc.worst_k.to_string() + " (margin " +
                            std::to_string(static_cast<double>(dc.margin)) + ")");
  RigidityOutcome<Real> out(make_plant(alpha, a_d, plant_exponent, eps_target, params.band, params.oversampling));
  out.dc = dc;
  out.planted_resonances = planted_resonances;
  out.trace = run_scheme(out.plant.form.cocycle, params);
  out.decay = decay_holds(out.trace, 1.5, params.floor);
  const Real tau = dc_alpha.tau;
  for (int n : out.trace.resonant_steps) {
    const Real N = static_cast<Real>(out.trace.steps[static_cast<std::size_t>(n - 1)].N);
    const Real Np = std::pow(2 * dc_alpha.gamma_inv, 1 / tau) * std::pow(N, Real(params.nu) / tau);
    out.N_prime.push_back(Np);
    if (!(Np / N > 1)) out.scales_grow = false;
  }
  out.pass = rigidity_verdict(out, params.floor);
  return out;
}

// ---------------------------------------------------------------------------

ResonanceWindow resonance_window(int N, double nu, int l) {
  if (l < 1) throw PreconditionError("resonance window index starts at 1");
  return {std::pow(static_cast<double>(N), nu / l), static_cast<double>(N)};
}

namespace {

/// Largest step count whose schedule entry exists.
int usable_horizon(const SchemeParams& p, int steps) {
  int n = 0;
  while (n < steps) {
    try {
      schedule(p, n + 1);
    } catch (const PreconditionError&) {
      break;
    }
    ++n;
  }
  return n;
}

}  // namespace

template <class Real>
ResonancePattern<Real> simulate_resonances(Real a, std::span<const Real> alpha, const SchemeParams& params, int steps) {
  ResonancePattern<Real> out;
  Real cur = a;
  for (int n = 1; n <= steps; ++n) {
    const auto [N, K] = schedule(params, n);
    const Real Kr = static_cast<Real>(K);
    const Resonance<Real> r = find_resonance(cur, alpha, N, Kr);
    out.angles.push_back(cur);
    out.k.push_back(r.k_r);
    out.slack.push_back(r.k_r ? 1 - r.distance * Kr : r.distance * Kr - 1);
    cur = reduce_constant(cur, alpha, r.k_r, Algebra<Real>{0, {0, 0}}).angle;
  }
  return out;
}

template <class Real>
std::optional<CascadePlan<Real>> plan_cascade(std::span<const Real> alpha, const SchemeParams& params,
                                              const std::vector<int>& steps, int horizon, const CascadeOptions& opts) {
  params.validate();
  horizon = usable_horizon(params, horizon);
  for (int s : steps)
    if (s < 1 || s > horizon) throw PreconditionError("planted step " + std::to_string(s) + " outside the schedule horizon");
  auto planted = [&](int n) { return std::find(steps.begin(), steps.end(), n) != steps.end(); };

  // Prefix test through step `upto`; returns the smallest slack or nothing on mismatch.
  auto admissible = [&](Real a, int upto) -> std::optional<Real> {
    const ResonancePattern<Real> pat = simulate_resonances(a, alpha, params, upto);
    Real margin = 1;
    for (int n = 1; n <= upto; ++n) {
      const auto& k = pat.k[static_cast<std::size_t>(n - 1)];
      if (k.has_value() != planted(n)) return std::nullopt;
      if (k && k->max_norm() < opts.min_k) return std::nullopt;
      const Real slack = pat.slack[static_cast<std::size_t>(n - 1)];
      if (slack < Real(opts.min_margin)) return std::nullopt;
      margin = std::min(margin, slack);
    }
    return margin;
  };

  std::vector<std::pair<Real, Real>> intervals{{Real(0), Real(0.5)}};
  long long samples = 0;
  std::optional<CascadePlan<Real>> best;
  for (int n = 1; n <= horizon && !intervals.empty(); ++n) {
    const Real h = Real(0.05) / static_cast<Real>(schedule(params, n).second);
    std::vector<std::pair<Real, Real>> next;
    for (const auto& [lo, hi] : intervals) {
      const long long count = static_cast<long long>(std::floor((hi - lo) / h)) + 1;
      samples += count;
      if (samples > opts.max_samples) throw PreconditionError("cascade search exceeds the sample budget");
      for (long long i = 0; i < count; ++i) {
        const Real a = lo + static_cast<Real>(i) * h;
        const auto margin = admissible(a, n);
        if (!margin) continue;
        if (!next.empty() && a - h <= next.back().second)
          next.back().second = a + h;
        else
          next.emplace_back(std::max(Real(0), a - h), a + h);
        if (n == horizon && (!best || *margin > best->margin)) {
          if (!best) best.emplace();
          best->angle = a;
          best->margin = *margin;
        }
      }
    }
    intervals = std::move(next);
  }
  if (!best) return std::nullopt;
  best->samples = samples;
  best->steps = steps;
  const ResonancePattern<Real> pat = simulate_resonances(best->angle, alpha, params, horizon);
  for (int s : steps) best->k.push_back(*pat.k[static_cast<std::size_t>(s - 1)]);
  return best;
}

template <class Real>
bool liouville_verdict(const LiouvilleOutcome<Real>& out) {
  return out.missed.empty() && out.control.resonant_steps.empty() &&
         out.control.status != SchemeStatus::Aborted && out.trace.status != SchemeStatus::Aborted;
}

template <class Real>
LiouvilleOutcome<Real> liouville_experiment(const std::vector<Real>& alpha, const std::vector<int>& steps,
                                            const AlgebraMap<Real>& F, const SchemeParams& params,
                                            const CascadeOptions& opts) {
  SchemeParams p = params;
  for (int s : steps) p.min_steps = std::max(p.min_steps, s);
  if (p.min_steps > p.max_steps) throw PreconditionError("planted steps beyond max_steps");
  const std::span<const Real> al(alpha);

  LiouvilleOutcome<Real> out;
  auto plan = plan_cascade(al, p, steps, p.max_steps, opts);
  if (!plan) throw PreconditionError("no initial angle realizes the planted resonance pattern");
  auto control = plan_cascade(al, p, {}, p.max_steps, opts);
  if (!control) throw PreconditionError("no resonance-free control angle at this margin");
  out.plan = *plan;
  out.control_plan = *control;
  out.trace = run_scheme(PerturbedCocycle<Real>(alpha, out.plan.angle, F), p);
  out.control = run_scheme(PerturbedCocycle<Real>(alpha, out.control_plan.angle, F), p);

  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto idx = static_cast<std::size_t>(steps[i] - 1);
    const bool hit = idx < out.trace.steps.size() && out.trace.steps[idx].k_r == out.plan.k[i];
    if (!hit) out.missed.push_back(steps[i]);
    out.windows.push_back(resonance_window(schedule(p, steps[i]).first, p.nu, static_cast<int>(i) + 1));
    out.in_window.push_back(out.windows.back().contains(out.plan.k[i]));
  }
  for (int n : out.trace.resonant_steps)
    if (std::find(steps.begin(), steps.end(), n) == steps.end()) out.unexpected.push_back(n);
  out.pass = liouville_verdict(out);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <class Real>
Real diagonal_angle(const Su2<Real>& C) {
  if (std::abs(C.w) > Real(1e-12)) throw PreconditionError("constant_conjugacy_support needs diagonal constants");
  return std::atan2(C.z.imag(), C.z.real()) / (2 * kPi<Real>);
}

template <class Real>
Real wrap01(Real x) {
  return x - std::floor(x);
}

}  // namespace

template <class Real>
ConjugacySupport constant_conjugacy_support(const Su2<Real>& C1, const Su2<Real>& C2, std::span<const Real> alpha,
                                            int K_max, Real tol) {
  const Real c1 = diagonal_angle(C1), c2 = diagonal_angle(C2);
  ConjugacySupport out;
  for_each_in_ball(static_cast<int>(alpha.size()), K_max, [&](const Freq& k) {
    const Real ka = dot<Real>(k, alpha);
    if (frac_dist(ka + c1 - c2) < tol) out.minus.push_back(k);
    if (frac_dist(ka + c1 + c2) < tol) out.plus.push_back(k);
  });
  return out;
}

namespace {

/// Smallest pairing distance over |k| <= K_max, skipping one (k, pairing) entry.
template <class Real>
Real pairing_margin(Real c1, Real c2, std::span<const Real> alpha, int K_max, const std::optional<Freq>& skip,
                    bool skip_plus) {
  Real m = 1;
  for_each_in_ball(static_cast<int>(alpha.size()), K_max, [&](const Freq& k) {
    const Real ka = dot<Real>(k, alpha);
    const bool is_skip = skip && k == *skip;
    if (!(is_skip && !skip_plus)) m = std::min(m, frac_dist(ka + c1 - c2));
    if (!(is_skip && skip_plus)) m = std::min(m, frac_dist(ka + c1 + c2));
  });
  return m;
}

}  // namespace

template <class Real>
ToyOutcome toy_experiment(std::span<const Real> alpha, int K_max, Real tol, int cases, std::uint64_t seed) {
  const int dim = static_cast<int>(alpha.size());
  Rng rng(seed);
  ToyOutcome out;
  for (int i = 0; i < cases; ++i) {
    ToyCase c;
    Real c1 = 0, c2 = 0;
    Freq k0(dim);
    do {
      do {
        for (int a = 0; a < dim; ++a) k0[a] = static_cast<int>(rng.integer(-K_max, K_max));
      } while (k0.is_zero());
      c.plus = rng.uniform() < 0.5;
      c1 = Real(rng.uniform());
      const Real shift = c1 + dot<Real>(k0, alpha);
      c2 = wrap01(c.plus ? -shift : shift);
    } while (!(pairing_margin(c1, c2, alpha, K_max, std::optional<Freq>(k0), c.plus) > 10 * tol));
    c.c1 = static_cast<double>(c1);
    c.c2 = static_cast<double>(c2);
    c.planted = k0;
    c.found = constant_conjugacy_support(Su2<Real>::diagonal(c1), Su2<Real>::diagonal(c2), alpha, K_max, tol);
    const auto& hit = c.plus ? c.found.plus : c.found.minus;
    const auto& other = c.plus ? c.found.minus : c.found.plus;
    c.ok = hit.size() == 1 && hit.front() == k0 && other.empty();
    out.planted_ok += c.ok;
    out.planted.push_back(std::move(c));
  }
  for (int i = 0; i < cases; ++i) {
    ToyCase c;
    Real c1 = 0, c2 = 0;
    do {
      c1 = Real(rng.uniform());
      c2 = Real(rng.uniform());
    } while (!(pairing_margin(c1, c2, alpha, K_max, std::nullopt, false) > 10 * tol));
    c.c1 = static_cast<double>(c1);
    c.c2 = static_cast<double>(c2);
    c.found = constant_conjugacy_support(Su2<Real>::diagonal(c1), Su2<Real>::diagonal(c2), alpha, K_max, tol);
    c.ok = c.found.empty();
    out.generic_ok += c.ok;
    out.generic.push_back(std::move(c));
  }
  out.pass = out.planted_ok == cases && out.generic_ok == cases;
  return out;
}

#define KAM_INSTANTIATE_EXPERIMENTS(R)                                                                          \
  template AlgebraMap<R> random_algebra_map<R>(int, int, double, double, Rng&);                                 \
  template Plant<R> make_plant(const std::vector<R>&, R, const AlgebraMap<R>&, std::optional<R>, int, int);      \
  template bool rigidity_verdict(const RigidityOutcome<R>&, double);                                            \
  template RigidityOutcome<R> rigidity_experiment(const std::vector<R>&, R, const DiophParams<R>&,               \
                                                  const AlgebraMap<R>&, std::optional<R>, int, const SchemeParams&); \
  template ResonancePattern<R> simulate_resonances(R, std::span<const R>, const SchemeParams&, int);             \
  template std::optional<CascadePlan<R>> plan_cascade(std::span<const R>, const SchemeParams&,                  \
                                                      const std::vector<int>&, int, const CascadeOptions&);     \
  template bool liouville_verdict(const LiouvilleOutcome<R>&);                                                  \
  template LiouvilleOutcome<R> liouville_experiment(const std::vector<R>&, const std::vector<int>&,             \
                                                    const AlgebraMap<R>&, const SchemeParams&,                  \
                                                    const CascadeOptions&);                                     \
  template ConjugacySupport constant_conjugacy_support(const Su2<R>&, const Su2<R>&, std::span<const R>, int, R); \
  template ToyOutcome toy_experiment(std::span<const R>, int, R, int, std::uint64_t);

KAM_INSTANTIATE_EXPERIMENTS(double)
KAM_INSTANTIATE_EXPERIMENTS(long double)

}  // namespace kam
