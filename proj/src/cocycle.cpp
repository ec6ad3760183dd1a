#include "su2kam/cocycle.hpp"

#include <algorithm>
#include <cmath>

#include "su2kam/errors.hpp"

namespace kam {

template <class Real>
PerturbedCocycle<Real>::PerturbedCocycle(std::vector<Real> alpha, Real angle, AlgebraMap<Real> F)
    : alpha_(std::move(alpha)), angle_(normalize_angle(angle)), F_(std::move(F)) {
  if (alpha_.empty() || static_cast<int>(alpha_.size()) != F_.dim())
    throw PreconditionError("rotation vector and perturbation dimensions differ");
  const Real f0 = cs_norm(F_, Real(0));
  if (!(f0 < 1)) throw PreconditionError("perturbation too large: ||F||_0 = " + std::to_string(static_cast<double>(f0)));
}

template <class Real>
GeneralCocycle<Real> to_general(const PerturbedCocycle<Real>& c) {
  std::vector<Factor<Real>> f{ConstantFactor<Real>{c.A()}};
  if (!c.F().is_zero()) f.push_back(ExpFactor<Real>{c.F()});
  return {c.alpha(), GroupMap<Real>(c.dim(), std::move(f))};
}

template <class Real>
GroupMap<Real> iterate(const GeneralCocycle<Real>& c, int n) {
  const int dim = c.dim();
  GroupMap<Real> out(dim);
  auto shift_by = [&](int j) {
    std::vector<Real> s(c.alpha.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<Real>(j) * c.alpha[i];
    return c.A.shifted(s);
  };
  if (n > 0) {
    for (int j = n - 1; j >= 0; --j) out = out * shift_by(j);
  } else if (n < 0) {
    for (int j = n; j <= -1; ++j) out = out * shift_by(j).inverse();
  }
  return out;
}

template <class Real>
GeneralCocycle<Real> conjugate(const GroupMap<Real>& B, const GeneralCocycle<Real>& c) {
  if (B.dim() != c.dim()) throw PreconditionError("conjugacy dimension mismatch");
  return {c.alpha, B.shifted(c.alpha) * c.A * B.inverse()};
}

template <class Real>
GeneralCocycle<Real> plant_reducible(std::vector<Real> alpha, const Su2<Real>& A_d, const GroupMap<Real>& D) {
  const int dim = static_cast<int>(alpha.size());
  GroupMap<Real> A = D.shifted(alpha).inverse() * GroupMap<Real>::constant(dim, A_d) * D;
  return {std::move(alpha), std::move(A)};
}

template <class Real>
Diagonalization<Real> diagonalize_constant(const Su2<Real>& A) {
  const Real theta = std::atan2(std::sqrt(A.z.imag() * A.z.imag() + std::norm(A.w)), A.z.real());
  const Real s = std::sin(theta);
  if (s < Real(1e-15)) return {Su2<Real>::identity(), theta / (2 * kPi<Real>)};
  // A = cos(theta) + sin(theta) v with v a unit vector of su(2); rotate v onto h.
  const Algebra<Real> v{A.z.imag() / s, A.w / s};
  const Algebra<Real> h = Algebra<Real>::h();
  const Real c = std::clamp(inner(v, h), Real(-1), Real(1));
  const Real phi = std::acos(c);
  Algebra<Real> axis = Real(0.5) * bracket(v, h);
  const Real an = axis.norm();
  Su2<Real> P;
  if (an > Real(1e-300)) {
    P = exp_map((phi / (2 * an)) * axis);
  } else if (c < 0) {
    P = exp_map((kPi<Real> / 2) * Algebra<Real>::j());
  }
  return {P, theta / (2 * kPi<Real>)};
}

template <class Real>
Real max_distance(const std::vector<Su2<Real>>& a, const std::vector<Su2<Real>>& b) {
  Real worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, distance(a[i], b[i]));
  return worst;
}

template <class Real>
PerturbedForm<Real> to_perturbed(const GeneralCocycle<Real>& c, int band, int oversampling) {
  const int dim = c.dim();
  const SpectralGrid<Real> grid(dim, oversampling * band + 1);
  const auto values = c.A.evaluate(grid);
  Complex<Real> mz{0, 0}, mw{0, 0};
  for (const auto& v : values) {
    mz += v.z;
    mw += v.w;
  }
  if (std::abs(mz) + std::abs(mw) < Real(1e-12)) throw PreconditionError("cocycle has no well-defined mean constant");
  const Su2<Real> Abar = renormalized(Su2<Real>{mz, mw});
  const auto diag = diagonalize_constant(Abar);
  std::vector<Algebra<Real>> logs(values.size());
  Real worst = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Algebra<Real> l = log_map(compose(inverse(Abar), values[i]));
    worst = std::max(worst, l.norm());
    logs[i] = adjoint_action(diag.P, l);
  }
  if (!(worst < Real(0.5)))
    throw PreconditionError("cocycle too far from constant: ||log(Abar^* A)||_0 = " +
                            std::to_string(static_cast<double>(worst)));
  AlgebraMap<Real> F = grid.analyze(logs, band);
  const AlgebraMap<Real> full = grid.analyze_full(logs);
  const Real tail = std::hypot(sobolev_norm(rest(full.t, band), Real(0)), sobolev_norm(rest(full.z, band), Real(0)));
  return {PerturbedCocycle<Real>(c.alpha, diag.angle, std::move(F)), diag.P, tail};
}

template <class Real>
ReducibilityGap<Real> almost_reducibility_gap(const GeneralCocycle<Real>& c, const GroupMap<Real>& B_n,
                                              const Su2<Real>& A_n, int points) {
  const SpectralGrid<Real> grid(c.dim(), points);
  const auto conj = conjugate(B_n, c).A.evaluate(grid);
  const auto B = B_n.evaluate(grid);
  ReducibilityGap<Real> gap;
  const Su2<Real> Ainv = inverse(A_n);
  for (std::size_t i = 0; i < conj.size(); ++i) {
    const Algebra<Real> F = log_map(compose(Ainv, conj[i]));
    gap.g1 = std::max(gap.g1, F.norm());
    gap.g2 = std::max(gap.g2, adjoint_action(B[i], F).norm());
  }
  return gap;
}

template class PerturbedCocycle<double>;
template class PerturbedCocycle<long double>;

#define KAM_INSTANTIATE_COCYCLE(R)                                                                             \
  template GeneralCocycle<R> to_general(const PerturbedCocycle<R>&);                                           \
  template GroupMap<R> iterate(const GeneralCocycle<R>&, int);                                                 \
  template GeneralCocycle<R> conjugate(const GroupMap<R>&, const GeneralCocycle<R>&);                          \
  template GeneralCocycle<R> plant_reducible(std::vector<R>, const Su2<R>&, const GroupMap<R>&);               \
  template PerturbedForm<R> to_perturbed(const GeneralCocycle<R>&, int, int);                                  \
  template ReducibilityGap<R> almost_reducibility_gap(const GeneralCocycle<R>&, const GroupMap<R>&,            \
                                                      const Su2<R>&, int);                                     \
  template Diagonalization<R> diagonalize_constant(const Su2<R>&);                                             \
  template R max_distance(const std::vector<Su2<R>>&, const std::vector<Su2<R>>&);

KAM_INSTANTIATE_COCYCLE(double)
KAM_INSTANTIATE_COCYCLE(long double)

}  // namespace kam
