#include "su2kam/kam_driver.hpp"

#include <algorithm>
#include <cmath>

#include "su2kam/arithmetic.hpp"
#include "su2kam/errors.hpp"

namespace kam {

void SchemeParams::validate() const {
  if (!(nu > tau)) throw PreconditionError("scheme parameters need nu > tau");
  if (!(sigma > 0 && sigma < 1)) throw PreconditionError("scheme parameters need sigma in (0,1)");
  if (N1 < 2) throw PreconditionError("scheme parameters need N1 >= 2");
  if (!(gamma_inv > 0)) throw PreconditionError("gamma_inv must be positive");
  if (s0 < 0 || max_steps < 1 || min_steps < 1 || oversampling < 3)
    throw PreconditionError("invalid s0, step counts or oversampling");
  if (band < 1 || max_band < band) throw PreconditionError("invalid band settings");
}

std::pair<int, double> schedule(const SchemeParams& p, int n) {
  if (n < 1) throw PreconditionError("schedule index starts at 1");
  const double N = std::round(std::pow(static_cast<double>(p.N1), std::pow(1 + p.sigma, n - 1)));
  if (!(N <= 1e6)) throw PreconditionError("schedule overflow: N_" + std::to_string(n) + " exceeds 1e6");
  return {static_cast<int>(N), std::pow(N, p.nu)};
}

StepParams SchemeParams::step_params(int n) const {
  const auto [N, K] = schedule(*this, n);
  StepParams sp;
  sp.N = N;
  sp.K = K;
  sp.gamma = 1 / gamma_inv;
  sp.tau = tau;
  sp.nu = nu;
  sp.C = C;
  sp.s0 = s0;
  sp.c10 = c10;
  sp.floor = floor;
  sp.band = band;
  sp.max_band = max_band;
  sp.oversampling = oversampling;
  sp.measure_aliasing = measure_aliasing;
  return sp;
}

std::string to_string(SchemeStatus s) {
  switch (s) {
    case SchemeStatus::Converged: return "converged";
    case SchemeStatus::Diverged: return "diverged";
    case SchemeStatus::GateFailed: return "gate_failed";
    case SchemeStatus::MaxSteps: return "max_steps";
    case SchemeStatus::Aborted: return "aborted";
  }
  return "unknown";
}

namespace {

template <class Real>
Real conjugacy_defect(const PerturbedCocycle<Real>& c, const GroupMap<Real>& H, const PerturbedCocycle<Real>& next,
                      int points) {
  const SpectralGrid<Real> grid(c.dim(), points);
  const auto conj = conjugate(H, to_general(c)).A.evaluate(grid);
  const auto target = to_general(next).A.evaluate(grid);
  return max_distance(conj, target);
}

}  // namespace

template <class Real>
SchemeTrace<Real> run_scheme(const PerturbedCocycle<Real>& c, const SchemeParams& p) {
  p.validate();
  const int dim = c.dim();
  SchemeTrace<Real> trace;
  trace.H = GroupMap<Real>(dim);
  trace.resonance_product = GroupMap<Real>(dim);
  trace.eps0_initial = cs_norm(c.F(), Real(0));
  trace.eps_s0_initial = cs_norm(without_noise(c.F()), Real(p.s0));
  if (!(trace.eps0_initial < Real(p.eps_gate)))
    throw PreconditionError("||F||_0 = " + std::to_string(static_cast<double>(trace.eps0_initial)) +
                            " is not below eps_gate = " + std::to_string(p.eps_gate));
  if (!(trace.eps_s0_initial < 1))
    trace.warnings.push_back("||F||_s0 = " + std::to_string(static_cast<double>(trace.eps_s0_initial)) + " >= 1");
  {
    DiophParams<Real> dp{Real(p.gamma_inv), Real(p.tau), dim == 1 ? p.dc_horizon : std::min<long long>(p.dc_horizon, 64)};
    const auto dc = dc_check<Real>(c.alpha(), dp);
    if (!dc.pass)
      throw PreconditionError("rotation fails the Diophantine check at k=" + dc.worst_k.to_string() +
                              " (margin " + std::to_string(static_cast<double>(dc.margin)) + ")");
  }

  PerturbedCocycle<Real> cur = c;
  int growth = 0;
  trace.status = SchemeStatus::MaxSteps;
  try {
    for (int n = 1; n <= p.max_steps; ++n) {
      StepResult<Real> res = conjugation_step(cur, p.step_params(n));
      const StepReport<Real>& rep = res.report;
      trace.H = res.G * trace.H;
      if (rep.k_r) {
        trace.resonant_steps.push_back(n);
        trace.resonance_product = res.resonance_part * trace.resonance_product;
      }
      if (p.track_conjugacy) {
        const int points = p.oversampling * rep.band_after + 1;
        const auto gap = almost_reducibility_gap(to_general(c), trace.H, res.next.A(), points);
        trace.gap_g1.push_back(gap.g1);
        trace.gap_g2.push_back(gap.g2);
        trace.conjugacy_defect.push_back(conjugacy_defect(c, trace.H, res.next, points));
      }
      trace.angles.push_back(res.next.angle());
      trace.Y.push_back(res.Y);
      trace.steps.push_back(rep);
      cur = std::move(res.next);

      const bool grew = rep.eps0_after > rep.eps0_before && rep.eps0_after > Real(p.floor);
      growth = grew ? growth + 1 : 0;
      if (growth >= 2) {
        trace.status = SchemeStatus::Diverged;
        trace.message = "eps0 grew on two consecutive steps";
        break;
      }
      if (rep.eps0_after <= Real(p.floor) && n >= p.min_steps) {
        trace.status = SchemeStatus::Converged;
        break;
      }
    }
  } catch (const GateFailure& e) {
    trace.status = SchemeStatus::GateFailed;
    trace.message = e.what();
  } catch (const KamError& e) {
    trace.status = SchemeStatus::Aborted;
    trace.message = e.what();
  }

  for (const auto& s : trace.steps) {
    if (s.normGs0 > 1 && s.N > 1)
      trace.lambda = std::max(trace.lambda, std::log(s.normGs0) / std::log(Real(s.N)) - Real(p.s0));
  }
  return trace;
}

template <class Real>
bool decay_holds(const SchemeTrace<Real>& trace, double exponent, double floor) {
  for (std::size_t i = 1; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    if (s.eps0_after <= Real(floor)) continue;
    if (!(s.eps0_after <= std::pow(s.eps0_before, Real(exponent)))) return false;
  }
  return true;
}

template <class Real>
NormalFormReport<Real> normal_form_extract(const PerturbedCocycle<Real>& c, const SchemeParams& p) {
  const SchemeTrace<Real> trace = run_scheme(c, p);
  if (trace.status != SchemeStatus::Converged)
    throw VerificationFailure("normal form needs a converged run, status " + to_string(trace.status));
  NormalFormReport<Real> out;
  out.D = trace.resonance_product.inverse() * trace.H;
  const GeneralCocycle<Real> conj = conjugate(out.D, to_general(c));
  const PerturbedForm<Real> pf = to_perturbed(conj, p.band, p.oversampling);
  out.rerun = run_scheme(pf.cocycle, p);
  if (out.rerun.status == SchemeStatus::Aborted || out.rerun.status == SchemeStatus::GateFailed)
    throw VerificationFailure("re-run failed: " + out.rerun.message);
  for (std::size_t i = 0; i < out.rerun.steps.size(); ++i) {
    const Real y = out.rerun.steps[i].normY0;
    out.y_norms.push_back(y);
    out.max_y_norm = std::max(out.max_y_norm, y);
    if (y > Real(p.normal_form_tol))
      throw VerificationFailure("normal form check failed at re-run step " + std::to_string(i + 1) +
                                ": ||Y||_0 = " + std::to_string(static_cast<double>(y)));
  }
  return out;
}

#define KAM_INSTANTIATE_DRIVER(R)                                                          \
  template SchemeTrace<R> run_scheme(const PerturbedCocycle<R>&, const SchemeParams&);     \
  template bool decay_holds(const SchemeTrace<R>&, double, double);                        \
  template NormalFormReport<R> normal_form_extract(const PerturbedCocycle<R>&, const SchemeParams&);

KAM_INSTANTIATE_DRIVER(double)
KAM_INSTANTIATE_DRIVER(long double)

}  // namespace kam
