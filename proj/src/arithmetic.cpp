#include "su2kam/arithmetic.hpp"

#include <cmath>
#include <limits>

#include "su2kam/errors.hpp"

namespace kam {

template <class Real>
ContinuedFraction<Real> continued_fraction(Real alpha, int n) {
  if (!(alpha > 0 && alpha < 1)) throw PreconditionError("continued_fraction: alpha must lie in (0,1)");
  ContinuedFraction<Real> cf;
  long long p_prev = 1, q_prev = 0, p = 0, q = 1;
  Real x = alpha;
  for (int i = 0; i < n; ++i) {
    if (!(x > 0) || 1 / x > Real(1e12))
      throw RationalInput("continued_fraction: partial quotient beyond 1e12 at index " + std::to_string(i + 1) +
                          "; input is rational at working precision");
    cf.gauss_orbit.push_back(x);
    const Real inv = 1 / x;
    const long long a = static_cast<long long>(std::floor(inv));
    cf.quotients.push_back(a);
    const long long p_next = a * p + p_prev;
    const long long q_next = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    cf.convergents.push_back({p, q});
    x = inv - static_cast<Real>(a);
  }
  return cf;
}

template <class Real>
Real alpha_from_periodic_cf(std::span<const long long> quotients) {
  if (quotients.empty()) throw PreconditionError("empty continued fraction");
  for (long long a : quotients)
    if (a < 1) throw PreconditionError("partial quotients must be positive");
  Real x = 0;
  const std::size_t passes = 1 + 400 / quotients.size();
  for (std::size_t pass = 0; pass < passes; ++pass)
    for (auto it = quotients.rbegin(); it != quotients.rend(); ++it) x = 1 / (static_cast<Real>(*it) + x);
  return x;
}

template <class Real>
Real alpha_from_finite_cf(std::span<const long long> quotients) {
  if (quotients.empty()) throw PreconditionError("empty continued fraction");
  Real x = 0;
  for (auto it = quotients.rbegin(); it != quotients.rend(); ++it) {
    if (*it < 1) throw PreconditionError("partial quotients must be positive");
    x = 1 / (static_cast<Real>(*it) + x);
  }
  return x;
}

namespace {

template <class Real>
DcReport<Real> scan(Real c, std::span<const Real> alpha, const DiophParams<Real>& params) {
  if (params.K_max < 1) throw PreconditionError("Diophantine horizon must be >= 1");
  if (!(params.gamma_inv > 0)) throw PreconditionError("gamma_inv must be positive");
  const int dim = static_cast<int>(alpha.size());
  DcReport<Real> report;
  report.horizon = params.K_max;
  report.margin = std::numeric_limits<Real>::infinity();
  report.worst_k = Freq(dim);
  for_each_in_ball(dim, static_cast<int>(params.K_max), [&](const Freq& k) {
    if (k.is_zero()) return;
    const Real m = std::pow(static_cast<Real>(k.max_norm()), params.tau) * frac_dist(dot<Real>(k, alpha) - c);
    if (m < report.margin) {
      report.margin = m;
      report.worst_k = k;
    }
  });
  report.pass = report.margin >= params.gamma_inv;
  return report;
}

}  // namespace

template <class Real>
DcReport<Real> dc_check(std::span<const Real> alpha, const DiophParams<Real>& params) {
  return scan(Real(0), alpha, params);
}

template <class Real>
DcReport<Real> dc_alpha_check(Real c, std::span<const Real> alpha, const DiophParams<Real>& params) {
  return scan(c, alpha, params);
}

template <class Real>
int rdc_witness_count(Real alpha, const DiophParams<Real>& params, int n_max) {
  const auto cf = continued_fraction(alpha, n_max);
  int count = 0;
  for (Real x : cf.gauss_orbit) {
    const Real a[] = {x};
    if (dc_check<Real>(a, params).pass) ++count;
  }
  return count;
}

template <class Real>
Resonance<Real> find_resonance(Real a, std::span<const Real> alpha, int N, Real K) {
  if (N < 1) throw PreconditionError("find_resonance: N must be >= 1");
  if (!(K > 0)) throw PreconditionError("find_resonance: K must be positive");
  const int dim = static_cast<int>(alpha.size());
  const Real threshold = 1 / K;
  Resonance<Real> res;
  res.distance = std::numeric_limits<Real>::infinity();
  res.nearest = Freq(dim);
  for_each_in_ball(dim, N, [&](const Freq& k) {
    const Real d = frac_dist(dot<Real>(k, alpha) - 2 * a);
    if (d < threshold) ++res.candidates;
    const bool better = d < res.distance || (d == res.distance && k.max_norm() < res.nearest.max_norm());
    if (better) {
      res.distance = d;
      res.nearest = k;
    }
  });
  if (res.distance >= threshold) return res;
  res.k_r = res.nearest;
  if (res.candidates > 1)
    res.warnings.push_back("resonance tie: " + std::to_string(res.candidates) + " modes below 1/K, kept k=" +
                           res.nearest.to_string());
  for_each_in_ball(dim, 2 * N, [&](const Freq& offset) {
    if (offset.is_zero()) return;
    const Freq k = res.nearest + offset;
    if (frac_dist(dot<Real>(k, alpha) - 2 * a) < threshold) res.window_violation = true;
  });
  if (res.window_violation)
    res.warnings.push_back("second resonance inside |k - k_r| <= 2N of k_r=" + res.nearest.to_string());
  return res;
}

#define KAM_INSTANTIATE_ARITH(R)                                                          \
  template ContinuedFraction<R> continued_fraction(R, int);                               \
  template R alpha_from_periodic_cf<R>(std::span<const long long>);                       \
  template R alpha_from_finite_cf<R>(std::span<const long long>);                         \
  template DcReport<R> dc_check(std::span<const R>, const DiophParams<R>&);               \
  template DcReport<R> dc_alpha_check(R, std::span<const R>, const DiophParams<R>&);      \
  template int rdc_witness_count(R, const DiophParams<R>&, int);                          \
  template Resonance<R> find_resonance(R, std::span<const R>, int, R);

KAM_INSTANTIATE_ARITH(double)
KAM_INSTANTIATE_ARITH(long double)

}  // namespace kam
