#include <doctest.h>

#include "oracles.hpp"
#include "su2kam/errors.hpp"
#include "su2kam/group_map.hpp"
#include "su2kam/kam_step.hpp"
#include "su2kam/random.hpp"

using namespace kam;
using GM = GroupMap<double>;
using A = Algebra<double>;

namespace {

AlgebraMap<double> small_map(Rng& rng, int band, double amp) {
  AlgebraMap<double> Y(1, band);
  for (int k = -band; k <= band; ++k) {
    Y.z.set(Freq{k}, {amp * rng.uniform(-1, 1), amp * rng.uniform(-1, 1)});
    if (k > 0) Y.t.set(Freq{k}, {amp * rng.uniform(-1, 1), amp * rng.uniform(-1, 1)});
  }
  Y.t.set(Freq{0}, amp * rng.uniform(-1, 1));
  return Y;
}

/// Value of each factor through the matrix power series, multiplied left to right.
oracle::Mat2 product_oracle(const GM& G, double x) {
  oracle::Mat2 m = oracle::identity();
  for (const auto& f : G.factors()) {
    oracle::Mat2 v;
    if (const auto* g = std::get_if<Geodesic<double>>(&f))
      v = oracle::expm(oracle::scale(oracle::pi * g->m[0] * x, oracle::mat(g->v)));
    else if (const auto* c = std::get_if<ConstantFactor<double>>(&f))
      v = oracle::mat(c->S);
    else
      v = oracle::expm(oracle::mat(std::get<ExpFactor<double>>(f).Y.evaluate(std::vector<double>{x})));
    m = oracle::mul(m, v);
  }
  return m;
}

}  // namespace

TEST_SUITE("group_map") {
  TEST_CASE("parity invariant is checked on construction") {
    CHECK_THROWS_AS(GM::geodesic(Freq{1}, A::h()), ParityViolation);
    CHECK_NOTHROW(GM::geodesic(Freq{2}, A::h()));
    CHECK_NOTHROW(GM(1, {Geodesic<double>{Freq{1}, A::h()}, Geodesic<double>{Freq{-3}, A::j()}}));
    CHECK_THROWS_AS(GM(2, {Geodesic<double>{Freq{1, 0}, A::h()}}), ParityViolation);
    CHECK_THROWS_AS(GM::geodesic(Freq{2}, A{}), PreconditionError);
    const GM g(1, {Geodesic<double>{Freq{3}, A::h()}, Geodesic<double>{Freq{1}, A::j()}});
    CHECK(g.geodesic_count() == 2);
    CHECK(g.parity().is_zero());
  }

  TEST_CASE("evaluation is the ordered product of factor values") {
    Rng rng(21);
    const GM G(1, {Geodesic<double>{Freq{-3}, A{0.3, {0.1, 0.4}}}, ConstantFactor<double>{exp_map(A{0.7, {0.2, -1.1}})},
                   Geodesic<double>{Freq{1}, A::j()}, ExpFactor<double>{small_map(rng, 3, 0.2)}});
    for (int n = 0; n < 20; ++n) {
      const double x = rng.uniform(0, 2);
      CHECK(oracle::dist(oracle::mat(G.evaluate(std::vector<double>{x})), product_oracle(G, x)) < 1e-13);
    }
  }

  TEST_CASE("inverse and shift") {
    Rng rng(22);
    const GM G(1, {Geodesic<double>{Freq{5}, A::h()}, ExpFactor<double>{small_map(rng, 2, 0.3)},
                   Geodesic<double>{Freq{1}, A{0, {0.6, 0.8}}}});
    const GM Gi = G.inverse();
    const std::vector<double> alpha{0.618033988749895};
    for (int n = 0; n < 20; ++n) {
      const std::vector<double> x{rng.uniform()};
      CHECK(distance(G.evaluate(x) * Gi.evaluate(x), Su2<double>::identity()) < 1e-13);
      CHECK(distance(G.shifted(alpha).evaluate(x), G.evaluate(std::vector<double>{x[0] + alpha[0]})) < 1e-13);
    }
  }

  TEST_CASE("even total parity gives a 1-periodic map") {
    Rng rng(23);
    const SpectralGrid<double> grid(1, 32);
    const GM even(1, {Geodesic<double>{Freq{3}, A::h()}, ExpFactor<double>{small_map(rng, 2, 0.3)},
                      Geodesic<double>{Freq{-1}, A::h()}});
    CHECK(periodicity_defect(even, grid) < 1e-13);
    CHECK(half_integer_content(even, 64) < 1e-12);

    // Two odd geodesics along h add up to one even geodesic.
    const double x = 0.3;
    const GM pair(1, {Geodesic<double>{Freq{1}, A::h()}, Geodesic<double>{Freq{3}, A::h()}});
    CHECK(distance(pair.evaluate(std::vector<double>{x}), exp_map(A{4 * oracle::pi * x, {0, 0}})) < 1e-13);
    const GM twisted(1, {Geodesic<double>{Freq{1}, A::h()}, Geodesic<double>{Freq{1}, A::j()}});
    CHECK(periodicity_defect(twisted, grid) < 1e-13);
  }

  TEST_CASE("C^s norm of constant and geodesic maps") {
    CHECK(std::abs(group_cs_norm(GM::constant(1, exp_map(A{0.4, {0.3, 0}})), 0.0, 16) - 1.0) < 1e-14);
    // x -> exp(2 pi x h) = {e^{2 i pi x}, 0}: first derivative has modulus 2 pi.
    CHECK(std::abs(group_cs_norm(GM::geodesic(Freq{2}, A::h()), 1.0, 16) - 2 * oracle::pi) < 1e-10);
  }
}
