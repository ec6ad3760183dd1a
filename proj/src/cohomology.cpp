#include "su2kam/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "su2kam/errors.hpp"

namespace kam {

namespace {

/// e^{2 i pi theta} - 1 computed as 2 i sin(pi theta) e^{i pi theta} after reducing theta mod 1.
template <class Real>
Complex<Real> divisor(Real theta) {
  theta -= std::round(theta);
  return Complex<Real>(0, 2 * std::sin(kPi<Real> * theta)) * std::polar(Real(1), kPi<Real> * theta);
}

/// k.alpha - 2a reduced mod 1, accumulated in long double.
template <class Real>
Real phase(const Freq& k, std::span<const Real> alpha, Real a) {
  long double t = -2 * static_cast<long double>(a);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    t += static_cast<long double>(k[static_cast<int>(i)]) * static_cast<long double>(alpha[i]);
  return static_cast<Real>(t - std::round(t));
}

template <class Real>
void check_divisor(SolveReport<Real>& rep, const Freq& k, Complex<Real> div) {
  const Real m = std::abs(div);
  if (m < rep.min_divisor) {
    rep.min_divisor = m;
    rep.min_divisor_k = k;
  }
  if (m < Real(kDivisorUnderflow))
    throw DivisorUnderflow("small divisor " + std::to_string(static_cast<double>(m)) + " at k=" + k.to_string());
}

}  // namespace

template <class Real>
Solution<Real> solve_diagonal(const ScalarSeries<Real>& F_t, std::span<const Real> alpha, int N, Real gamma,
                              Real tau) {
  if (N < 0) throw PreconditionError("solve_diagonal: N must be non-negative");
  if (static_cast<int>(alpha.size()) != F_t.dim()) throw PreconditionError("solve_diagonal: dimension mismatch");
  const int dim = F_t.dim();
  const int band = std::min(N, F_t.band());
  Solution<Real> sol{ScalarSeries<Real>(dim, band, F_t.channel()), {}};
  SolveReport<Real>& rep = sol.report;
  rep.band = band;
  rep.excluded = {Freq(dim)};
  rep.obstruction = F_t.coeff(Freq(dim));
  rep.min_divisor = std::numeric_limits<Real>::infinity();
  rep.min_divisor_k = Freq(dim);
  const FreqBox box(dim, band);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Freq k = box.freq(i);
    if (k.is_zero()) continue;
    const Complex<Real> div = divisor(phase(k, alpha, Real(0)));
    check_divisor(rep, k, div);
    const Complex<Real> f = F_t.coeff(k);
    const Complex<Real> y = -f / div;
    sol.Y.coeffs()[i] = y;
    rep.residual = std::max(rep.residual, std::abs(div * y + f));
    ++rep.solved_modes;
  }
  sol.Y.enforce_hermitian();
  rep.solution_norm0 = cs_norm(sol.Y, Real(0));
  rep.input_norm0 = cs_norm(F_t, Real(0));
  if (rep.input_norm0 > 0 && N > 0)
    rep.estimate_ratio = rep.solution_norm0 / (gamma * std::pow(Real(N), tau + Real(dim) / 2) * rep.input_norm0);
  return sol;
}

template <class Real>
Solution<Real> solve_twisted(const ScalarSeries<Real>& F_z, Real a, std::span<const Real> alpha, int N, Real K,
                             const TwistedOptions& opts) {
  if (N < 1) throw PreconditionError("solve_twisted: N must be >= 1");
  if (static_cast<int>(alpha.size()) != F_z.dim()) throw PreconditionError("solve_twisted: dimension mismatch");
  const Real bound = Real(opts.C) * Real(opts.gamma) * std::pow(Real(N), Real(opts.tau));
  if (K < bound)
    throw PreconditionError("solve_twisted: K = " + std::to_string(static_cast<double>(K)) + " below C gamma N^tau = " +
                            std::to_string(static_cast<double>(bound)));
  const int dim = F_z.dim();
  const Resonance<Real> res = find_resonance(a, alpha, N, K);
  const int band = res.k_r ? F_z.band() : std::min(N, F_z.band());
  Solution<Real> sol{ScalarSeries<Real>(dim, band, Channel::Complex), {}};
  SolveReport<Real>& rep = sol.report;
  rep.band = band;
  rep.k_r = res.k_r;
  rep.window_violation = res.window_violation;
  rep.warnings = res.warnings;
  rep.min_divisor = std::numeric_limits<Real>::infinity();
  rep.min_divisor_k = Freq(dim);
  if (res.k_r) {
    rep.excluded = {*res.k_r};
    rep.obstruction = F_z.coeff(*res.k_r);
  }
  const FreqBox box(dim, band);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Freq k = box.freq(i);
    if (!in_truncation(k, N, TruncMode::Centered, res.k_r)) continue;
    const Complex<Real> div = divisor(phase(k, alpha, a));
    check_divisor(rep, k, div);
    const Complex<Real> f = F_z.coeff(k);
    const Complex<Real> y = -f / div;
    sol.Y.coeffs()[i] = y;
    rep.residual = std::max(rep.residual, std::abs(div * y + f));
    ++rep.solved_modes;
  }
  rep.solution_norm0 = cs_norm(sol.Y, Real(0));
  rep.input_norm0 = cs_norm(F_z, Real(0));
  if (rep.input_norm0 > 0)
    rep.estimate_ratio =
        rep.solution_norm0 / (std::pow(Real(N), Real(opts.nu) + Real(dim) / 2) * rep.input_norm0);
  return sol;
}

#define KAM_INSTANTIATE_COHOMOLOGY(R)                                                         \
  template Solution<R> solve_diagonal(const ScalarSeries<R>&, std::span<const R>, int, R, R); \
  template Solution<R> solve_twisted(const ScalarSeries<R>&, R, std::span<const R>, int, R, const TwistedOptions&);

KAM_INSTANTIATE_COHOMOLOGY(double)
KAM_INSTANTIATE_COHOMOLOGY(long double)

}  // namespace kam
