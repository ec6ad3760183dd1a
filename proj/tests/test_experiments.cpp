#include <doctest.h>

#include "oracles.hpp"
#include "su2kam/errors.hpp"
#include "su2kam/experiments.hpp"

using namespace kam;

namespace {

const double phi = (std::sqrt(5.0) - 1) / 2;
const std::vector<double> alpha{phi};

SchemeParams cascade_params() {
  SchemeParams p;
  p.N1 = 8;
  p.sigma = 0.5;
  p.nu = 1.6;
  p.tau = 1;
  p.max_steps = 4;
  p.max_band = 2048;
  return p;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("random maps are seeded and real on the t-channel") {
    Rng r1(5), r2(5), r3(6);
    const auto a = random_algebra_map<double>(1, 3, 1e-2, 0.5, r1);
    const auto b = random_algebra_map<double>(1, 3, 1e-2, 0.5, r2);
    const auto c = random_algebra_map<double>(1, 3, 1e-2, 0.5, r3);
    CHECK((a - b).is_zero());
    CHECK_FALSE((a - c).is_zero());
    for (int k = -3; k <= 3; ++k) {
      CHECK(std::abs(a.t.coeff(Freq{k}) - std::conj(a.t.coeff(Freq{-k}))) == 0);
      CHECK(std::abs(a.z.coeff(Freq{k})) <= 1e-2 * std::sqrt(2.0) * std::pow(0.5, std::abs(k)));
    }
  }

  TEST_CASE("plants hit their target size") {
    AlgebraMap<double> Y(1, 1);
    Y.z.set(Freq{1}, 1.0);
    const auto p = make_plant<double>(alpha, 0.25, Y, 1e-3, 16, 3);
    CHECK(std::abs(p.eps0 - 1e-3) < 1e-12 * 1e-3);
    CHECK(std::abs(cs_norm(p.form.cocycle.F(), 0.0) - p.eps0) < 1e-15);
    const auto id = make_plant<double>(alpha, 0.15, AlgebraMap<double>(1, 1), std::nullopt, 16, 3);
    CHECK(id.eps0 < 1e-15);
    CHECK(std::abs(id.form.cocycle.angle() - 0.15) < 1e-15);
  }

  TEST_CASE("rigidity rejects constants on a resonance") {
    const double a_d = std::fmod(3.5 * phi, 1.0);
    AlgebraMap<double> Y(1, 1);
    Y.z.set(Freq{1}, 1.0);
    CHECK_THROWS_AS(rigidity_experiment<double>(alpha, a_d, DiophParams<double>{0.1, 2, 10000}, Y, 1e-3, 0,
                                                SchemeParams{}),
                    PreconditionError);
  }

  TEST_CASE("rigidity with the identity plant") {
    SchemeParams p;
    p.min_steps = 5;
    const auto out = rigidity_experiment<double>(alpha, 0.15, DiophParams<double>{0.05, 2, 10000},
                                                 AlgebraMap<double>(1, 1), std::nullopt, 0, p);
    CHECK(out.pass);
    CHECK(out.trace.resonant_steps.empty());
    CHECK(out.trace.steps.size() >= 5);
    CHECK(out.trace.steps[4].eps0_after < 1e-12);
  }

  TEST_CASE("resonance windows") {
    const auto w = resonance_window(100, 1.6, 2);
    CHECK(w.lower == doctest::Approx(std::pow(100.0, 0.8)));
    CHECK(w.upper == 100);
    CHECK(w.contains(Freq{50}));
    CHECK_FALSE(w.contains(Freq{30}));
    CHECK_FALSE(w.contains(Freq{100}));
    CHECK_THROWS_AS(resonance_window(100, 1.6, 0), PreconditionError);

    // A planted mode beyond N cannot be found at that step.
    const double a = 120 * phi / 2;
    const auto r = find_resonance(a, std::span<const double>(alpha), 100, 1e4);
    CHECK((!r.k_r || (*r.k_r)[0] != 120));
    CHECK((*find_resonance(a, std::span<const double>(alpha), 130, 1e4).k_r)[0] == 120);
  }

  TEST_CASE("resonance simulation follows the resonance search") {
    const SchemeParams p = cascade_params();
    const double a = 0.2;
    const auto pat = simulate_resonances(a, std::span<const double>(alpha), p, 3);
    REQUIRE(pat.k.size() == 3);
    const auto [N, K] = schedule(p, 1);
    const auto r = find_resonance(a, std::span<const double>(alpha), N, K);
    CHECK(pat.k[0].has_value() == r.k_r.has_value());
    CHECK(std::abs(pat.angles[0] - a) < 1e-15);
  }

  TEST_CASE("cascade planner realizes the requested pattern") {
    const SchemeParams p = cascade_params();
    const auto plan = plan_cascade<double>(std::span<const double>(alpha), p, {2, 3, 4}, 4);
    REQUIRE(plan);
    CHECK(plan->steps == std::vector<int>{2, 3, 4});
    CHECK(plan->margin >= 0.05);
    const auto pat = simulate_resonances(plan->angle, std::span<const double>(alpha), p, 4);
    CHECK_FALSE(pat.k[0]);
    for (int s = 2; s <= 4; ++s) {
      REQUIRE(pat.k[static_cast<std::size_t>(s - 1)]);
      CHECK(*pat.k[static_cast<std::size_t>(s - 1)] == plan->k[static_cast<std::size_t>(s - 2)]);
      CHECK(pat.k[static_cast<std::size_t>(s - 1)]->max_norm() >= 2);
    }
    const auto quiet = plan_cascade<double>(std::span<const double>(alpha), p, {}, 4);
    REQUIRE(quiet);
    for (const auto& k : simulate_resonances(quiet->angle, std::span<const double>(alpha), p, 4).k) CHECK_FALSE(k);
  }

  TEST_CASE("conjugacy support between constants") {
    using S = Su2<double>;
    const std::span<const double> al(alpha);
    const double c1 = 0.1234;
    const S C1 = S::diagonal(c1);
    auto sup = constant_conjugacy_support(C1, S::diagonal(c1 + 4 * phi), al, 1000, 1e-9);
    CHECK(sup.minus == std::vector<Freq>{Freq{4}});
    CHECK(sup.plus.empty());
    sup = constant_conjugacy_support(C1, S::diagonal(-c1 - 7 * phi), al, 1000, 1e-9);
    CHECK(sup.plus == std::vector<Freq>{Freq{7}});
    CHECK(sup.minus.empty());
    CHECK_THROWS_AS(constant_conjugacy_support(C1, S{{0.6, 0}, {0.8, 0}}, al, 10, 1e-9), PreconditionError);

    // Below the DC margin of |k| <= 1000 each pairing has at most one frequency.
    const double margin = oracle::scan_margin(phi, 0, 1, 2000).margin / 2000;
    Rng rng(71);
    for (int n = 0; n < 100; ++n) {
      const auto s = constant_conjugacy_support(S::diagonal(rng.uniform()), S::diagonal(rng.uniform()), al, 1000,
                                                margin / 4);
      CHECK(s.minus.size() <= 1);
      CHECK(s.plus.size() <= 1);
    }
  }

  TEST_CASE("toy experiment") {
    const auto out = toy_experiment<double>(std::span<const double>(alpha), 200, 1e-9, 10, 3);
    CHECK(out.pass);
    CHECK(out.planted_ok == 10);
    CHECK(out.generic_ok == 10);
  }
}
