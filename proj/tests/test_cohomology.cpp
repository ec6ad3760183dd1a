#include <doctest.h>

#include "dense_oracle.hpp"
#include "oracles.hpp"
#include "su2kam/cohomology.hpp"
#include "su2kam/errors.hpp"
#include "su2kam/random.hpp"

using namespace kam;
using Series = ScalarSeries<double>;
using oracle::cd;

namespace {

const double phi = (std::sqrt(5.0) - 1) / 2;
const std::vector<double> alpha{phi};

Series random_series(Rng& rng, int band, Channel ch) {
  Series f(1, band, ch);
  for (int k = ch == Channel::Real ? 0 : -band; k <= band; ++k) {
    cd c(rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (ch == Channel::Real && k == 0) c = c.real();
    f.set(Freq{k}, c);
  }
  return f;
}

/// lo..hi without `skip`.
std::vector<int> range(int lo, int hi, int skip) {
  std::vector<int> r;
  for (int k = lo; k <= hi; ++k)
    if (k != skip) r.push_back(k);
  return r;
}

double max_diff(const Series& Y, const std::vector<int>& modes, const std::vector<cd>& ref) {
  double m = 0;
  for (std::size_t i = 0; i < modes.size(); ++i) m = std::max(m, std::abs(Y.coeff(Freq{modes[i]}) - ref[i]));
  return m;
}

}  // namespace

TEST_SUITE("cohomology") {
  TEST_CASE("diagonal equation, single cosine") {
    Series F(1, 1, Channel::Real);
    F.set(Freq{1}, 0.5);
    const auto sol = solve_diagonal(F, std::span<const double>(alpha), 4);
    for (int s : {-1, 1}) {
      const cd expected = -0.5 / (std::polar(1.0, 2 * oracle::pi * s * phi) - 1.0);
      CHECK(std::abs(sol.Y.coeff(Freq{s}) - expected) < 1e-15);
    }
    CHECK(sol.Y.coeff(Freq{0}) == cd(0));
  }

  TEST_CASE("diagonal equation, constant input") {
    Series F(1, 2, Channel::Real);
    F.set(Freq{0}, 0.3);
    const auto sol = solve_diagonal(F, std::span<const double>(alpha), 2);
    CHECK(sol.Y.max_abs_coeff() == 0);
    CHECK(sol.report.obstruction == cd(0.3));
    CHECK(sol.report.excluded == std::vector<Freq>{Freq{0}});
  }

  TEST_CASE("diagonal equation against the dense oracle") {
    Rng rng(51);
    for (int n = 0; n < 10; ++n) {
      const Series F = random_series(rng, 8, Channel::Real);
      const auto sol = solve_diagonal(F, std::span<const double>(alpha), 8);
      const auto modes = range(-8, 8, 0);
      CHECK(max_diff(sol.Y, modes, oracle::dense_solve(F, modes, phi, 1.0L, 17)) < 1e-12);
      CHECK(sol.report.residual < 1e-12);
      CHECK(sol.report.solved_modes == 16);
      CHECK(sol.Y.band() <= F.band());
    }
    // The solution band follows N when N is below the input band.
    const Series F = random_series(rng, 8, Channel::Real);
    CHECK(solve_diagonal(F, std::span<const double>(alpha), 3).Y.band() == 3);
  }

  TEST_CASE("diagonal divisor underflow") {
    Series F(1, 2, Channel::Real);
    F.set(Freq{2}, 1.0);
    const std::vector<double> half{0.5};
    CHECK_THROWS_AS(solve_diagonal(F, std::span<const double>(half), 2), DivisorUnderflow);
  }

  TEST_CASE("twisted equation, single non-resonant mode") {
    const double a = 0.15;
    Series F(1, 3, Channel::Complex);
    F.set(Freq{2}, cd(1e-3, -2e-4));
    const auto sol = solve_twisted(F, a, std::span<const double>(alpha), 10, 1000.0);
    CHECK_FALSE(sol.report.k_r);
    const cd expected = -F.coeff(Freq{2}) / (std::polar(1.0, 2 * oracle::pi * (2 * phi - 2 * a)) - 1.0);
    CHECK(std::abs(sol.Y.coeff(Freq{2}) - expected) < 1e-16);
  }

  TEST_CASE("twisted equation, planted resonance") {
    const double a = 1.5 * phi;
    Rng rng(52);
    const Series F = random_series(rng, 8, Channel::Complex);
    const auto sol = solve_twisted(F, a, std::span<const double>(alpha), 8, 512.0);
    REQUIRE(sol.report.k_r);
    CHECK((*sol.report.k_r)[0] == 3);
    CHECK(sol.Y.coeff(Freq{3}) == cd(0));
    CHECK(sol.report.obstruction == F.coeff(Freq{3}));
    CHECK(sol.report.excluded == std::vector<Freq>{Freq{3}});
    const auto modes = range(-8, 8, 3);
    const auto mult = oracle::twist(a);
    CHECK(max_diff(sol.Y, modes, oracle::dense_solve(F, modes, phi, mult, 17)) < 1e-12);
  }

  TEST_CASE("twisted equation against the dense oracle") {
    Rng rng(53);
    for (int n = 0; n < 10; ++n) {
      const double a = rng.uniform(0, 0.5);
      const Series F = random_series(rng, 8, Channel::Complex);
      const auto sol = solve_twisted(F, a, std::span<const double>(alpha), 8, 512.0);
      const int kr = sol.report.k_r ? (*sol.report.k_r)[0] : 9;
      const auto modes = range(-8, 8, kr);
      const auto mult = oracle::twist(a);
      CHECK(max_diff(sol.Y, modes, oracle::dense_solve(F, modes, phi, mult, 17)) < 1e-12);
      CHECK(sol.report.residual < 1e-12);
    }
  }

  TEST_CASE("linearity") {
    Rng rng(54);
    const Series F1 = random_series(rng, 6, Channel::Complex), F2 = random_series(rng, 6, Channel::Complex);
    const std::span<const double> al(alpha);
    const auto y1 = solve_twisted(F1, 0.15, al, 6, 216.0).Y, y2 = solve_twisted(F2, 0.15, al, 6, 216.0).Y;
    const auto y12 = solve_twisted(F1 + F2, 0.15, al, 6, 216.0).Y;
    CHECK((y12 - (y1 + y2)).max_abs_coeff() < 1e-13);
  }

  TEST_CASE("twisted preconditions") {
    Series F(1, 2, Channel::Complex);
    F.set(Freq{1}, 1e-3);
    // K below C gamma N^tau.
    CHECK_THROWS_AS(solve_twisted(F, 0.15, std::span<const double>(alpha), 10, 100.0), PreconditionError);
  }
}
