#include <doctest.h>

#include "oracles.hpp"
#include "su2kam/arithmetic.hpp"
#include "su2kam/errors.hpp"
#include "su2kam/random.hpp"

using namespace kam;

namespace {

const double phi = (std::sqrt(5.0) - 1) / 2;

std::span<const double> one(const double& a) { return {&a, 1}; }

}  // namespace

TEST_SUITE("arithmetic") {
  TEST_CASE("distance to the integers") {
    CHECK(frac_dist(0.5) == 0.5);
    CHECK(frac_dist(1.25) == 0.25);
    CHECK(std::abs(frac_dist(phi) - (1 - phi)) < 1e-16);
    Rng rng(31);
    for (int n = 0; n < 100; ++n) {
      const double x = rng.uniform(-10, 10);
      CHECK(std::abs(frac_dist(x) - oracle::nearest_int_dist(x)) < 1e-15);
      CHECK(frac_dist(x) == frac_dist(-x));
      CHECK(std::abs(frac_dist(x + 1) - frac_dist(x)) < 1e-14);
    }
  }

  TEST_CASE("continued fractions") {
    const auto g = continued_fraction(phi, 20);
    for (long long a : g.quotients) CHECK(a == 1);
    const auto s = continued_fraction(std::sqrt(2.0) - 1, 15);
    for (long long a : s.quotients) CHECK(a == 2);
    CHECK_THROWS_AS(continued_fraction(1.0 / 3, 10), RationalInput);

    CHECK(std::abs(g.gauss_orbit[1] - (1 / phi - std::floor(1 / phi))) < 1e-15);
    double prev = 1;
    for (std::size_t k = 0; k < g.convergents.size(); ++k) {
      const auto [p, q] = g.convergents[k];
      const double err = phi - double(p) / double(q);
      CHECK(std::abs(err) < 1 / double(q * q));
      CHECK(std::abs(err) < prev);
      if (k > 0) CHECK((err > 0) != (phi - double(g.convergents[k - 1].p) / double(g.convergents[k - 1].q) > 0));
      prev = std::abs(err);
    }
  }

  TEST_CASE("continued fraction values") {
    const long long one_q[] = {1};
    CHECK(std::abs(alpha_from_periodic_cf<double>(one_q) - phi) < 1e-15);
    CHECK(std::abs(golden_mean<long double>() - (std::sqrt(5.0L) - 1) / 2) < 1e-18L);
    auto q = oracle::euclid(63, 128);
    CHECK(q.front() == 0);
    q.erase(q.begin());
    CHECK(alpha_from_finite_cf<double>(q) == 63.0 / 128);
  }

  TEST_CASE("Diophantine check against a brute-force scan") {
    DiophParams<double> p{0.38, 1, 10000};
    auto r = dc_check(one(phi), p);
    const auto scan = oracle::scan_margin(phi, 0, 1, 10000);
    CHECK(r.pass);
    CHECK(std::abs(r.margin - scan.margin) < 1e-12);
    // k = 1 is the worst mode: 1 - phi = (3 - sqrt 5)/2.
    CHECK(std::abs(r.worst_k[0]) == 1);
    CHECK(std::abs(r.margin - (3 - std::sqrt(5.0)) / 2) < 1e-15);
    CHECK_FALSE(dc_check(one(phi), DiophParams<double>{0.4, 1, 10000}).pass);

    p.tau = 5;
    p.gamma_inv = 10;
    CHECK(dc_check(one(phi), p).pass == (oracle::scan_margin(phi, 0, 5, 10000).margin >= 10));
    p.gamma_inv = 0.38;
    CHECK(dc_check(one(phi), p).pass);

    const double rat = 63.0 / 128 + 1e-15;
    r = dc_check(one(rat), DiophParams<double>{0.4, 1, 10000});
    CHECK_FALSE(r.pass);
    CHECK(r.worst_k.max_norm() == 128);
  }

  TEST_CASE("Diophantine condition relative to a constant") {
    const DiophParams<double> p{0.1, 2, 10000};
    const double c7 = 7 * phi - std::floor(7 * phi);
    auto r = dc_alpha_check(c7, one(phi), p);
    CHECK_FALSE(r.pass);
    CHECK(r.worst_k[0] == 7);

    const auto half = oracle::scan_margin(phi, 0.5, 2, 10000);
    r = dc_alpha_check(0.5, one(phi), p);
    CHECK(r.pass == (half.margin >= 0.1));
    CHECK(std::abs(r.margin - half.margin) < 1e-9);

    const DiophParams<double> q{0.4, 1, 2000};
    CHECK(dc_alpha_check(0.0, one(phi), q).pass == dc_check(one(phi), q).pass);
    CHECK(std::abs(dc_alpha_check(0.0, one(phi), q).margin - dc_check(one(phi), q).margin) < 1e-15);

    // Two frequencies.
    const std::vector<double> alpha2{phi, std::sqrt(2.0) - 1};
    const auto r2 = dc_check(std::span<const double>(alpha2), DiophParams<double>{1e-3, 2, 30});
    double m = 1e300;
    for (int a = -30; a <= 30; ++a)
      for (int b = -30; b <= 30; ++b) {
        if (a == 0 && b == 0) continue;
        const double k = std::max(std::abs(a), std::abs(b));
        m = std::min(m, k * k * oracle::nearest_int_dist(a * alpha2[0] + b * alpha2[1]));
      }
    CHECK(std::abs(r2.margin - m) < 1e-12);
  }

  TEST_CASE("recurrent Diophantine witnesses") {
    // The Gauss orbit of phi is constant.
    CHECK(rdc_witness_count(phi, DiophParams<double>{0.38, 1, 1000}, 5) == 5);
    CHECK(rdc_witness_count(phi, DiophParams<double>{0.4, 1, 1000}, 5) == 0);
  }

  TEST_CASE("resonance search") {
    const double a = 1.5 * phi;
    auto r = find_resonance(a, one(phi), 5, 1000.0);
    REQUIRE(r.k_r);
    CHECK((*r.k_r)[0] == 3);
    CHECK(r.distance < 1e-14);

    // Brute force selects an angle with no resonance at N = 10, K = 1000.
    Rng rng(32);
    double quiet = -1;
    while (quiet < 0) {
      const double x = rng.uniform(0, 0.5);
      double m = 1;
      for (int k = -10; k <= 10; ++k) m = std::min(m, oracle::nearest_int_dist(k * phi - 2 * x));
      if (m > 1e-3) quiet = x;
    }
    CHECK_FALSE(find_resonance(quiet, one(phi), 10, 1000.0).k_r);

    // nu > tau: any resonance is alone in its 2N window.
    for (int n = 0; n < 100; ++n) {
      const int N = 20;
      const double K = std::pow(N, 3.0);
      // Every other angle sits near a planted resonance.
      const double x = n % 2 ? rng.uniform(0, 0.5)
                             : (double(rng.integer(-N, N)) * phi + rng.uniform(-0.5, 0.5) / K) / 2;
      r = find_resonance(x, one(phi), N, K);
      long long best = 0;
      double bd = 1;
      for (int k = -N; k <= N; ++k) {
        const double dk = oracle::nearest_int_dist(k * phi - 2 * x);
        if (dk < bd) bd = dk, best = k;
      }
      CHECK(std::abs(r.distance - bd) < 1e-14);
      CHECK(r.k_r.has_value() == (bd < 1 / K));
      if (!r.k_r) continue;
      CHECK((*r.k_r)[0] == best);
      CHECK_FALSE(r.window_violation);
      for (long long k = best - 2 * N; k <= best + 2 * N; ++k)
        if (k != best) CHECK(oracle::nearest_int_dist(double(k) * phi - 2 * x) >= 1 / K);
    }
  }
}
