#pragma once

#include <span>
#include <variant>
#include <vector>

#include "su2kam/fourier.hpp"
#include "su2kam/lattice.hpp"
#include "su2kam/su2.hpp"

namespace kam {

/// x -> exp(pi (m.x) v), v a unit vector. 2-periodic in direction i when m_i is odd.
template <class Real>
struct Geodesic {
  Freq m;
  Algebra<Real> v;
};

template <class Real>
struct ConstantFactor {
  Su2<Real> S;
};

/// x -> exp(Y(x)).
template <class Real>
struct ExpFactor {
  AlgebraMap<Real> Y;
};

template <class Real>
using Factor = std::variant<Geodesic<Real>, ConstantFactor<Real>, ExpFactor<Real>>;

/// A map T^d -> SU(2) kept as an ordered product; factors()[0] is the leftmost factor.
/// Every construction checks that the geodesic parities cancel, so the map is 1-periodic.
template <class Real>
class GroupMap {
 public:
  explicit GroupMap(int dim = 1) : dim_(dim) {}
  GroupMap(int dim, std::vector<Factor<Real>> factors);

  static GroupMap constant(int dim, const Su2<Real>& S) { return GroupMap(dim, {ConstantFactor<Real>{S}}); }
  static GroupMap exponential(const AlgebraMap<Real>& Y) { return GroupMap(Y.dim(), {ExpFactor<Real>{Y}}); }
  static GroupMap geodesic(const Freq& m, const Algebra<Real>& v) {
    return GroupMap(m.dim(), {Geodesic<Real>{m, v}});
  }

  int dim() const { return dim_; }
  const std::vector<Factor<Real>>& factors() const { return factors_; }
  bool is_identity() const { return factors_.empty(); }
  std::size_t geodesic_count() const;
  /// Sum of the geodesic frequency vectors mod 2.
  Freq parity() const;
  /// Largest band among exponential factors and half-frequencies of geodesics.
  int nominal_band() const;

  GroupMap inverse() const;
  /// x -> G(x + alpha), still in factored form.
  GroupMap shifted(std::span<const Real> alpha) const;

  Su2<Real> evaluate(std::span<const Real> x) const;
  std::vector<Su2<Real>> evaluate(const SpectralGrid<Real>& grid) const;

  friend GroupMap operator*(const GroupMap& a, const GroupMap& b) {
    std::vector<Factor<Real>> f = a.factors_;
    f.insert(f.end(), b.factors_.begin(), b.factors_.end());
    return GroupMap(a.dim_, std::move(f));
  }

 private:
  int dim_;
  std::vector<Factor<Real>> factors_;
};

/// C^s norm of x -> (z(x), w(x)) measured on a grid of `points` per direction.
template <class Real>
Real group_cs_norm(const GroupMap<Real>& G, Real s, int points);

/// Largest deviation from 1-periodicity: |G(x + e_i) - G(x)| over the grid, all directions.
template <class Real>
Real periodicity_defect(const GroupMap<Real>& G, const SpectralGrid<Real>& grid);

extern template class GroupMap<double>;
extern template class GroupMap<long double>;

}  // namespace kam
