#include "su2kam/group_map.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "su2kam/errors.hpp"

namespace kam {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

template <class Real>
GroupMap<Real>::GroupMap(int dim, std::vector<Factor<Real>> factors) : dim_(dim), factors_(std::move(factors)) {
  Freq check(dim);
  for (auto& f : factors_) {
    std::visit(overloaded{[&](Geodesic<Real>& g) {
                            if (g.m.dim() != dim) throw PreconditionError("geodesic frequency dimension mismatch");
                            const Real n = g.v.norm();
                            if (!(n > 0)) throw PreconditionError("geodesic direction must be non-zero");
                            g.v = (Real(1) / n) * g.v;
                          },
                          [&](ConstantFactor<Real>&) {},
                          [&](ExpFactor<Real>& e) {
                            if (e.Y.dim() != dim) throw PreconditionError("exponent dimension mismatch");
                          }},
               f);
  }
  if (!parity().is_zero())
    throw ParityViolation("geodesic parities sum to " + parity().to_string() + "; map would not be 1-periodic");
}

template <class Real>
std::size_t GroupMap<Real>::geodesic_count() const {
  return static_cast<std::size_t>(std::count_if(factors_.begin(), factors_.end(), [](const Factor<Real>& f) {
    return std::holds_alternative<Geodesic<Real>>(f);
  }));
}

template <class Real>
Freq GroupMap<Real>::parity() const {
  Freq p(dim_);
  for (const auto& f : factors_)
    if (const auto* g = std::get_if<Geodesic<Real>>(&f)) p += g->m;
  return p.parity();
}

template <class Real>
int GroupMap<Real>::nominal_band() const {
  int band = 0;
  for (const auto& f : factors_) {
    if (const auto* g = std::get_if<Geodesic<Real>>(&f)) band = std::max(band, (g->m.max_norm() + 1) / 2);
    if (const auto* e = std::get_if<ExpFactor<Real>>(&f)) band = std::max(band, e->Y.band());
  }
  return band;
}

template <class Real>
GroupMap<Real> GroupMap<Real>::inverse() const {
  std::vector<Factor<Real>> out;
  out.reserve(factors_.size());
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    std::visit(overloaded{[&](const Geodesic<Real>& g) { out.push_back(Geodesic<Real>{g.m, -g.v}); },
                          [&](const ConstantFactor<Real>& c) { out.push_back(ConstantFactor<Real>{kam::inverse(c.S)}); },
                          [&](const ExpFactor<Real>& e) { out.push_back(ExpFactor<Real>{Real(-1) * e.Y}); }},
               *it);
  }
  return GroupMap(dim_, std::move(out));
}

template <class Real>
GroupMap<Real> GroupMap<Real>::shifted(std::span<const Real> alpha) const {
  std::vector<Factor<Real>> out;
  out.reserve(factors_.size() + geodesic_count());
  for (const auto& f : factors_) {
    std::visit(overloaded{[&](const Geodesic<Real>& g) {
                            const Real phase = kPi<Real> * dot<Real>(g.m, alpha);
                            out.push_back(ConstantFactor<Real>{exp_map(phase * g.v)});
                            out.push_back(g);
                          },
                          [&](const ConstantFactor<Real>& c) { out.push_back(c); },
                          [&](const ExpFactor<Real>& e) { out.push_back(ExpFactor<Real>{e.Y.shifted(alpha)}); }},
               f);
  }
  return GroupMap(dim_, std::move(out));
}

template <class Real>
Su2<Real> GroupMap<Real>::evaluate(std::span<const Real> x) const {
  Su2<Real> acc;
  for (const auto& f : factors_) {
    const Su2<Real> value =
        std::visit(overloaded{[&](const Geodesic<Real>& g) { return exp_map((kPi<Real> * dot<Real>(g.m, x)) * g.v); },
                              [&](const ConstantFactor<Real>& c) { return c.S; },
                              [&](const ExpFactor<Real>& e) { return exp_map(e.Y.evaluate(x)); }},
                   f);
    acc = compose(acc, value);
  }
  return acc;
}

template <class Real>
std::vector<Su2<Real>> GroupMap<Real>::evaluate(const SpectralGrid<Real>& grid) const {
  if (grid.dim() != dim_) throw PreconditionError("grid/map dimension mismatch");
  std::vector<Su2<Real>> acc(grid.size());
  for (const auto& f : factors_) {
    if (const auto* g = std::get_if<Geodesic<Real>>(&f)) {
      for (std::size_t i = 0; i < acc.size(); ++i) {
        const auto x = grid.point(i);
        acc[i] = compose(acc[i], exp_map((kPi<Real> * dot<Real>(g->m, std::span<const Real>(x))) * g->v));
      }
    } else if (const auto* c = std::get_if<ConstantFactor<Real>>(&f)) {
      for (auto& a : acc) a = compose(a, c->S);
    } else {
      const auto values = grid.synthesize(std::get<ExpFactor<Real>>(f).Y);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = compose(acc[i], exp_map(values[i]));
    }
  }
  return acc;
}

template <class Real>
Real group_cs_norm(const GroupMap<Real>& G, Real s, int points) {
  const SpectralGrid<Real> grid(G.dim(), points);
  const auto values = G.evaluate(grid);
  std::vector<Complex<Real>> z(values.size()), w(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    z[i] = values[i].z;
    w[i] = values[i].w;
  }
  return cs_norm_pair(without_noise(grid.analyze_full(z, Channel::Complex)),
                      without_noise(grid.analyze_full(w, Channel::Complex)), s);
}

template <class Real>
Real periodicity_defect(const GroupMap<Real>& G, const SpectralGrid<Real>& grid) {
  Real worst = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto x = grid.point(i);
    const Su2<Real> base = G.evaluate(std::span<const Real>(x));
    for (int a = 0; a < G.dim(); ++a) {
      auto y = x;
      y[static_cast<std::size_t>(a)] += 1;
      worst = std::max(worst, distance(base, G.evaluate(std::span<const Real>(y))));
    }
  }
  return worst;
}

template class GroupMap<double>;
template class GroupMap<long double>;
template double group_cs_norm(const GroupMap<double>&, double, int);
template long double group_cs_norm(const GroupMap<long double>&, long double, int);
template double periodicity_defect(const GroupMap<double>&, const SpectralGrid<double>&);
template long double periodicity_defect(const GroupMap<long double>&, const SpectralGrid<long double>&);

}  // namespace kam
