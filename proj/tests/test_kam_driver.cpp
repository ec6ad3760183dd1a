#include <doctest.h>

#include "su2kam/errors.hpp"
#include "su2kam/kam_driver.hpp"

using namespace kam;

namespace {

const double phi = (std::sqrt(5.0) - 1) / 2;

template <class Real = double>
PerturbedCocycle<Real> cocycle(double a, int k, double eps) {
  AlgebraMap<Real> F(1, 4);
  F.z.set(Freq{k}, Real(eps));
  F.t.set(Freq{1}, {Real(eps / 2), Real(-eps / 3)});
  return PerturbedCocycle<Real>({(std::sqrt(Real(5)) - 1) / 2}, Real(a), F);
}

}  // namespace

TEST_SUITE("kam_driver") {
  TEST_CASE("schedule") {
    SchemeParams p;
    auto [N1, K1] = schedule(p, 1);
    CHECK(N1 == 10);
    CHECK(K1 == doctest::Approx(1000.0).epsilon(1e-14));
    CHECK(schedule(p, 2).first == 20);
    CHECK(schedule(p, 3).first == 49);
    CHECK(schedule(p, 2).second == doctest::Approx(8000.0).epsilon(1e-14));
    CHECK_THROWS_AS(schedule(p, 0), PreconditionError);
    CHECK_THROWS_AS(schedule(p, 40), PreconditionError);
  }

  TEST_CASE("parameter validation") {
    SchemeParams p;
    p.nu = p.tau;
    CHECK_THROWS_AS(p.validate(), PreconditionError);
    p = {};
    p.sigma = 1;
    CHECK_THROWS_AS(p.validate(), PreconditionError);
    p = {};
    p.N1 = 1;
    CHECK_THROWS_AS(p.validate(), PreconditionError);
    CHECK_NOTHROW(SchemeParams{}.validate());
  }

  TEST_CASE("zero perturbation converges at once") {
    const PerturbedCocycle<double> c({phi}, 0.15, AlgebraMap<double>(1, 4));
    const auto t = run_scheme(c, SchemeParams{});
    CHECK(t.status == SchemeStatus::Converged);
    CHECK(t.steps.size() == 1);
    CHECK(t.resonant_steps.empty());
    CHECK(t.H.is_identity());
    const auto nf = normal_form_extract(c, SchemeParams{});
    CHECK(nf.D.is_identity());
  }

  TEST_CASE("non-resonant run converges with fast decay") {
    SchemeParams p;
    p.min_steps = 4;
    const auto c = cocycle(0.15, 2, 1e-3);
    const auto t = run_scheme(c, p);
    CHECK(t.status == SchemeStatus::Converged);
    CHECK(t.steps.size() >= 4);
    CHECK(t.resonant_steps.empty());
    CHECK(decay_holds(t, 1.5, p.floor));
    CHECK(t.steps.back().eps0_after < 1e-13);
    for (double d : t.conjugacy_defect) CHECK(d < 1e-9);
    for (std::size_t i = 1; i < t.steps.size(); ++i) CHECK(t.steps[i].N > t.steps[i - 1].N);

    const auto nf = normal_form_extract(c, p);
    CHECK(nf.max_y_norm <= p.normal_form_tol);
  }

  TEST_CASE("resonant steps are the steps carrying k_r") {
    SchemeParams p;
    p.min_steps = 3;
    const auto t = run_scheme(cocycle(1.5 * phi + 1e-9, 3, 1e-4), p);
    CHECK(t.status == SchemeStatus::Converged);
    std::vector<int> with_kr;
    for (std::size_t i = 0; i < t.steps.size(); ++i)
      if (t.steps[i].k_r) with_kr.push_back(static_cast<int>(i) + 1);
    CHECK(with_kr == t.resonant_steps);
    REQUIRE(!t.resonant_steps.empty());
    CHECK(t.resonant_steps.front() == 1);
    CHECK(t.resonance_product.geodesic_count() >= 2);
    for (double d : t.conjugacy_defect) CHECK(d < 1e-9);
  }

  TEST_CASE("initial smallness is required") {
    SchemeParams p;
    CHECK_THROWS_AS(run_scheme(cocycle(0.15, 2, 0.1), p), PreconditionError);
  }

  TEST_CASE("decay test") {
    // eps before step n+1 is eps after step n; step 1 is exempt.
    SchemeTrace<double> t;
    double before = 1e-3;
    for (double e : {1e-3, 1e-5, 1e-9, 1e-16}) {
      StepReport<double> r;
      r.eps0_before = before;
      r.eps0_after = e;
      t.steps.push_back(r);
      before = e;
    }
    CHECK(decay_holds(t, 1.5, 1e-13));
    t.steps[2].eps0_after = 1e-7;
    t.steps[3].eps0_before = 1e-7;
    CHECK_FALSE(decay_holds(t, 1.5, 1e-13));
    t.steps[2].eps0_after = 1e-9;
    t.steps[3].eps0_before = 1e-9;
    t.steps[3].eps0_after = 1e-10;
    CHECK_FALSE(decay_holds(t, 1.5, 1e-13));
  }

  TEST_CASE("extended precision run") {
    SchemeParams p;
    p.precision = 64;
    p.min_steps = 4;
    const auto t = run_scheme(cocycle<long double>(0.15, 2, 1e-3), p);
    CHECK(t.status == SchemeStatus::Converged);
    CHECK(t.steps.back().eps0_after < 1e-15L);
  }
}
