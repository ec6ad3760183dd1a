#include "su2kam/kam_step.hpp"

#include <algorithm>
#include <cmath>

#include "su2kam/errors.hpp"

namespace kam {

template <class Real>
Reduction<Real> reduce_constant(Real a, std::span<const Real> alpha, const std::optional<Freq>& k_r,
                                const Algebra<Real>& obstruction) {
  const int dim = static_cast<int>(alpha.size());
  Reduction<Real> red;
  red.k_r = k_r;
  red.delta = Freq(dim);
  red.direction = Algebra<Real>::h();
  Su2<Real> At = compose(Su2<Real>::diagonal(a), exp_map(obstruction));
  std::vector<Factor<Real>> factors;
  if (k_r && !k_r->is_zero()) {
    red.has_B = true;
    const Real phase = -kPi<Real> * dot<Real>(*k_r, alpha);
    At = compose(exp_map(phase * Algebra<Real>::h()), At);
    red.delta = k_r->parity();
    red.has_C = !red.delta.is_zero();
  }
  red.A_tilde = At;
  Su2<Real> raw = At;
  if (red.has_C) {
    const Algebra<Real> dir{At.z.imag(), At.w};
    const Real n = dir.norm();
    if (n > Real(1e-14)) red.direction = (Real(1) / n) * dir;
    raw = compose(exp_map((kPi<Real> * dot<Real>(red.delta, alpha)) * red.direction), At);
  }
  const auto diag = diagonalize_constant(raw);
  red.P = diag.P;
  red.angle = diag.angle;
  if (distance(red.P, Su2<Real>::identity()) > 0) factors.push_back(ConstantFactor<Real>{red.P});
  if (red.has_C) factors.push_back(Geodesic<Real>{red.delta, red.direction});
  if (red.has_B) factors.push_back(Geodesic<Real>{-*k_r, Algebra<Real>::h()});
  red.factor = GroupMap<Real>(dim, std::move(factors));
  return red;
}

namespace {

template <class Real>
std::vector<Algebra<Real>> conjugated_logs(const GroupMap<Real>& G, const PerturbedCocycle<Real>& c,
                                           const Su2<Real>& A_next, const SpectralGrid<Real>& grid) {
  const auto Gs = G.shifted(c.alpha()).evaluate(grid);
  const auto Gv = G.evaluate(grid);
  const auto Fv = grid.synthesize(c.F());
  const Su2<Real> A = c.A();
  const Su2<Real> Ainv = inverse(A_next);
  std::vector<Algebra<Real>> logs(Gv.size());
  for (std::size_t i = 0; i < Gv.size(); ++i) {
    const Su2<Real> m = compose(compose(compose(Ainv, Gs[i]), compose(A, exp_map(Fv[i]))), inverse(Gv[i]));
    logs[i] = log_map(m);
  }
  return logs;
}

template <class Real>
Real l1_beyond(const ScalarSeries<Real>& f, int band) {
  Real s = 0;
  const FreqBox b = f.box();
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.freq(i).max_norm() > band) s += std::abs(f.coeffs()[i]);
  return s;
}

}  // namespace

template <class Real>
StepResult<Real> conjugation_step(const PerturbedCocycle<Real>& c, const StepParams& p) {
  const int dim = c.dim();
  const Real N = static_cast<Real>(p.N);
  const Real K = static_cast<Real>(p.K);
  const std::span<const Real> alpha(c.alpha());
  StepReport<Real> rep;
  rep.N = p.N;
  rep.K = K;
  rep.angle_before = c.angle();
  rep.eps0_before = cs_norm(c.F(), Real(0));
  rep.eps_s0_before = cs_norm(without_noise(c.F()), Real(p.s0));
  rep.gate = Real(p.c10) * K * std::pow(N, Real(p.s0)) * rep.eps0_before;
  if (rep.gate >= 1 && rep.eps0_before > Real(p.floor))
    throw GateFailure("smallness gate c10 K N^s0 eps0 = " + std::to_string(static_cast<double>(rep.gate)) +
                      " >= 1 at N=" + std::to_string(p.N));

  const auto sol_t = solve_diagonal(c.F().t, alpha, p.N, Real(p.gamma), Real(p.tau));
  const TwistedOptions opts{p.gamma, p.tau, p.C, p.nu};
  const auto sol_z = solve_twisted(c.F().z, c.angle(), alpha, p.N, K, opts);
  rep.k_r = sol_z.report.k_r;
  rep.warnings = sol_z.report.warnings;
  rep.ratio_t = sol_t.report.estimate_ratio;
  rep.ratio_z = sol_z.report.estimate_ratio;
  rep.min_divisor = std::min(sol_t.report.min_divisor, sol_z.report.min_divisor);
  {
    const Resonance<Real> res = find_resonance(c.angle(), alpha, p.N, K);
    rep.resonance_distance = res.distance;
  }
  rep.obstruction = {sol_t.report.obstruction.real(), rep.k_r ? sol_z.report.obstruction : Complex<Real>(0, 0)};

  const Reduction<Real> red = reduce_constant(c.angle(), alpha, rep.k_r, rep.obstruction);
  rep.has_B = red.has_B;
  rep.has_C = red.has_C;
  rep.parity_B = red.has_B ? rep.k_r->parity() : Freq(dim);
  rep.parity_C = red.delta;
  rep.angle_after = red.angle;

  AlgebraMap<Real> Y(sol_t.Y, sol_z.Y);
  GroupMap<Real> G = Y.is_zero() ? red.factor : red.factor * GroupMap<Real>::exponential(Y);
  std::vector<Factor<Real>> cb;
  for (const auto& f : red.factor.factors())
    if (std::holds_alternative<Geodesic<Real>>(f)) cb.push_back(f);
  GroupMap<Real> resonance_part(dim, std::move(cb));

  int shift = rep.k_r ? rep.k_r->max_norm() + (red.has_C ? 1 : 0) : 0;
  const int band = std::min(std::max(p.band, c.F().band() + shift), std::max(p.max_band, c.F().band()));
  rep.band_after = band;
  const Su2<Real> A_next = Su2<Real>::diagonal(red.angle);
  const SpectralGrid<Real> grid(dim, p.oversampling * band + 1);
  const auto logs = conjugated_logs(G, c, A_next, grid);
  AlgebraMap<Real> F_next = grid.analyze(logs, band);
  {
    const auto back = grid.synthesize(F_next);
    for (std::size_t i = 0; i < logs.size(); ++i)
      rep.identity_residual = std::max(rep.identity_residual, (back[i] - logs[i]).norm());
    const AlgebraMap<Real> full = grid.analyze_full(logs);
    rep.tail = l1_beyond(full.t, band) + l1_beyond(full.z, band);
  }
  if (p.measure_aliasing) {
    const SpectralGrid<Real> fine(dim, 2 * p.oversampling * band + 1);
    const AlgebraMap<Real> again = fine.analyze(conjugated_logs(G, c, A_next, fine), band);
    const AlgebraMap<Real> diff = again - F_next;
    rep.aliasing = std::max(diff.t.max_abs_coeff(), diff.z.max_abs_coeff());
  }

  rep.eps0_after = cs_norm(F_next, Real(0));
  rep.eps_s0_after = cs_norm(without_noise(F_next), Real(p.s0));
  rep.normY0 = cs_norm(Y, Real(0));
  for (const auto& g : G.evaluate(grid)) rep.normG0 = std::max(rep.normG0, std::sqrt(std::norm(g.z) + std::norm(g.w)));
  rep.normGs0 = group_cs_norm(G, Real(p.s0), p.oversampling * band + 1);
  rep.c10_fit = rep.normG0 / (1 + K * std::pow(N, Real(p.tau) + Real(0.5)) * rep.eps0_before);
  if (rep.eps0_before > 0)
    rep.c20_fit = rep.eps0_after /
                  (2 * K * K * std::pow(N, 2 * Real(p.tau) + Real(dim)) * rep.eps0_before * rep.eps0_before);
  if (rep.identity_residual > Real(1e-10))
    rep.warnings.push_back("conjugation identity residual " + std::to_string(static_cast<double>(rep.identity_residual)));

  PerturbedCocycle<Real> next(c.alpha(), red.angle, std::move(F_next));
  return {std::move(G), std::move(resonance_part), std::move(Y), std::move(next), std::move(rep)};
}

template <class Real>
Real half_integer_content(const GroupMap<Real>& G, int points) {
  const SpectralGrid<Real> grid(G.dim(), points);
  std::vector<Complex<Real>> z(grid.size()), w(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto x = grid.point(i);
    for (auto& v : x) v *= 2;
    const Su2<Real> g = G.evaluate(std::span<const Real>(x));
    z[i] = g.z;
    w[i] = g.w;
  }
  const auto sz = grid.analyze_full(z, Channel::Complex);
  const auto sw = grid.analyze_full(w, Channel::Complex);
  Real odd = 0, total = 0;
  const FreqBox b = sz.box();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Real e = std::norm(sz.coeffs()[i]) + std::norm(sw.coeffs()[i]);
    total += e;
    if (!b.freq(i).parity().is_zero()) odd += e;
  }
  return total > 0 ? std::sqrt(odd / total) : Real(0);
}

#define KAM_INSTANTIATE_STEP(R)                                                                              \
  template Reduction<R> reduce_constant(R, std::span<const R>, const std::optional<Freq>&, const Algebra<R>&); \
  template StepResult<R> conjugation_step(const PerturbedCocycle<R>&, const StepParams&);                     \
  template R half_integer_content(const GroupMap<R>&, int);

KAM_INSTANTIATE_STEP(double)
KAM_INSTANTIATE_STEP(long double)

}  // namespace kam
