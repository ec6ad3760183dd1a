#include <doctest.h>

#include "oracles.hpp"
#include "su2kam/errors.hpp"
#include "su2kam/kam_step.hpp"
#include "su2kam/random.hpp"

using namespace kam;
using A = Algebra<double>;
using S = Su2<double>;
using GM = GroupMap<double>;

namespace {

const double phi = (std::sqrt(5.0) - 1) / 2;

AlgebraMap<double> z_mode(int k, std::complex<double> c, int band = 4) {
  AlgebraMap<double> F(1, band);
  F.z.set(Freq{k}, c);
  return F;
}

/// max over random x of |G(x+alpha) A e^{F(x)} G^*(x) - A' e^{F'(x)}|.
double identity_defect(const PerturbedCocycle<double>& c, const StepResult<double>& r, Rng& rng) {
  double worst = 0;
  for (int n = 0; n < 30; ++n) {
    const std::vector<double> x{rng.uniform()}, xa{x[0] + c.alpha()[0]};
    const S lhs = r.G.evaluate(xa) * c.A() * exp_map(c.F().evaluate(x)) * inverse(r.G.evaluate(x));
    const S rhs = r.next.A() * exp_map(r.next.F().evaluate(x));
    worst = std::max(worst, distance(lhs, rhs));
  }
  return worst;
}

StepParams params(int N, double K) {
  StepParams p;
  p.N = N;
  p.K = K;
  p.band = 32;
  return p;
}

}  // namespace

TEST_SUITE("kam_step") {
  TEST_CASE("zero perturbation is a fixed point") {
    const PerturbedCocycle<double> c({phi}, 0.15, AlgebraMap<double>(1, 4));
    const auto r = conjugation_step(c, params(10, 1000));
    CHECK(r.G.is_identity());
    CHECK(r.next.angle() == c.angle());
    CHECK(r.next.F().is_zero());
    CHECK_FALSE(r.report.k_r);
  }

  TEST_CASE("non-resonant step is quadratic") {
    Rng rng(61);
    double prev = 0;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
      const PerturbedCocycle<double> c({phi}, 0.15, z_mode(2, eps));
      const auto r = conjugation_step(c, params(10, 1000));
      CHECK_FALSE(r.report.k_r);
      CHECK(r.G.geodesic_count() == 0);
      CHECK(r.report.identity_residual <= 1e-10);
      CHECK(identity_defect(c, r, rng) < 1e-12);
      CHECK(r.report.eps0_after < 100 * eps * eps);
      if (prev > 0) CHECK(std::log(prev / r.report.eps0_after) / std::log(10.0) >= 1.8);
      prev = r.report.eps0_after;
    }
  }

  TEST_CASE("non-resonant constant moves by the mean") {
    const double eps = 1e-6;
    AlgebraMap<double> F = z_mode(1, {eps, eps});
    F.t.set(Freq{0}, 2 * eps);
    F.t.set(Freq{2}, {eps, 0});
    const PerturbedCocycle<double> c({phi}, 0.15, F);
    const auto r = conjugation_step(c, params(10, 1000));
    CHECK(std::abs(r.next.angle() - (0.15 + 2 * eps / (2 * oracle::pi))) < 1e-10);
  }

  TEST_CASE("odd resonance needs the geodesic C") {
    Rng rng(62);
    const double eps = 1e-4;
    const double a = 1.5 * phi + 1e-9;
    const PerturbedCocycle<double> c({phi}, a, z_mode(3, eps));
    const auto r = conjugation_step(c, params(10, 1000));
    REQUIRE(r.report.k_r);
    CHECK((*r.report.k_r)[0] == 3);
    CHECK(r.report.has_B);
    CHECK(r.report.has_C);
    CHECK(r.G.parity().is_zero());
    CHECK(periodicity_defect(r.G, SpectralGrid<double>(1, 64)) < 1e-12);
    CHECK(half_integer_content(r.G, 128) < 1e-10);
    const double expected = normalize_angle(a - 1.5 * phi + 0.5 * phi);
    CHECK(std::abs(r.next.angle() - expected) < 5 * eps);
    CHECK(identity_defect(c, r, rng) < 1e-10);
    CHECK(r.resonance_part.geodesic_count() == 2);
  }

  TEST_CASE("even resonance needs B only") {
    const double eps = 1e-4;
    const double a = normalize_angle(phi + 1e-9);
    const PerturbedCocycle<double> c({phi}, a, z_mode(2, eps));
    const auto r = conjugation_step(c, params(10, 1000));
    REQUIRE(r.report.k_r);
    CHECK((*r.report.k_r)[0] == 2);
    CHECK(r.report.has_B);
    CHECK_FALSE(r.report.has_C);
    CHECK(periodicity_defect(r.G, SpectralGrid<double>(1, 64)) < 1e-12);
    CHECK(r.resonance_part.geodesic_count() == 1);
  }

  TEST_CASE("B moves the resonant obstruction to frequency zero") {
    // B(x) = {e^{-2 i pi k_r x / 2}, 0} sampled over [0, 2) where it is periodic.
    const int kr = 3;
    const A ob{2e-5, {3e-5, -1e-5}};
    const SpectralGrid<double> grid(1, 64);
    std::vector<A> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = 2 * grid.point(i)[0];
      const A o{ob.t, ob.u * std::polar(1.0, 2 * oracle::pi * kr * x)};
      vals[i] = adjoint_action(exp_map(A{-oracle::pi * kr * x, {0, 0}}), o);
    }
    const auto m = grid.analyze_full(vals);
    CHECK(spectral_support(m.z, 1e-18) == std::vector<Freq>{Freq{0}});
    CHECK(std::abs(m.z.coeff(Freq{0}) - ob.u) < 1e-15);
    CHECK(std::abs(m.t.coeff(Freq{0}) - ob.t) < 1e-15);
  }

  TEST_CASE("reduction of a constant") {
    const std::vector<double> al{phi};
    const std::span<const double> alpha(al);
    const auto none = reduce_constant(0.2, alpha, std::nullopt, A{});
    CHECK(none.factor.is_identity());
    CHECK(std::abs(none.angle - 0.2) < 1e-15);

    // Reduction conjugates (alpha, A exp(ob e^{2 i pi k_r x})) to the constant {e^{2 i pi angle}, 0}.
    Rng rng(63);
    for (int kr : {2, 3, -1, 0}) {
      const double a = normalize_angle(kr * phi / 2 + 1e-7);
      const A ob{1e-5, {2e-5, 1e-5}};
      const auto red = reduce_constant(a, alpha, std::optional<Freq>(Freq{kr}), ob);
      CHECK(red.has_B == (kr != 0));
      CHECK(red.has_C == (kr % 2 != 0));
      for (int n = 0; n < 10; ++n) {
        const double x = rng.uniform();
        const A o{ob.t, ob.u * std::polar(1.0, 2 * oracle::pi * kr * x)};
        const S lhs = red.factor.evaluate(std::vector<double>{x + phi}) * S::diagonal(a) * exp_map(o) *
                      inverse(red.factor.evaluate(std::vector<double>{x}));
        CHECK(distance(lhs, S::diagonal(red.angle)) < 1e-12);
      }
    }
  }

  TEST_CASE("smallness gate") {
    const PerturbedCocycle<double> c({phi}, 0.15, z_mode(2, 1e-3));
    StepParams p = params(10, 1000);
    p.c10 = 1;
    CHECK_THROWS_AS(conjugation_step(c, p), GateFailure);
  }
}
