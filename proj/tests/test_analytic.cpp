#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wmwpower/analytic.hpp"
#include "wmwpower/errors.hpp"
#include "wmwpower/math.hpp"
#include "wmwpower/report.hpp"
#include "wmwpower/rng.hpp"

using namespace wmwpower;

TEST_CASE("shifted exponential constants") {
  auto c = shieh_constants(ShiehFamily::shifted_exponential, 0.8);
  CHECK(c.theta == doctest::Approx(-std::log(0.4)).epsilon(1e-14));
  CHECK(c.p2 == doctest::Approx(1.0 - (2.0 / 3.0) * 0.4).epsilon(1e-14));
  CHECK(c.p3 == doctest::Approx(1.0 - 0.4 + 0.16 / 3.0).epsilon(1e-14));
}

TEST_CASE("all families collapse to the null at p = 0.5") {
  for (auto fam : {ShiehFamily::normal, ShiehFamily::shifted_exponential,
                   ShiehFamily::double_exponential}) {
    auto c = shieh_constants(fam, 0.5);
    CHECK(std::fabs(c.theta) <= 1e-12);
    CHECK(c.p2 == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(c.p3 == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(shieh_constants(ShiehFamily::normal, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(shieh_constants(ShiehFamily::normal, 1.0), std::invalid_argument);
}

TEST_CASE("normal p2 against a frozen high-precision value and a MC oracle") {
  auto c = shieh_constants(ShiehFamily::normal, 0.8);
  CHECK(c.theta == doctest::Approx(std::sqrt(2.0) * normal_quantile(0.8)).epsilon(1e-14));
  // two independent quadratures of E[Phi(Z + theta)^2] agree on this value
  CHECK(c.p2 == doctest::Approx(0.687150566664570).epsilon(1e-9));

  RandomStream stream(31337);
  const long long draws = 10000000;
  double acc = 0.0;
  for (long long i = 0; i < draws; ++i) {
    const double v = normal_cdf(normal_quantile(stream.uniform01()) + c.theta);
    acc += v * v;
  }
  const double mc = acc / double(draws);
  CHECK(std::fabs(mc - c.p2) <= 4.0 * 9e-5);
}

TEST_CASE("laplace theta: numeric inverse matches the lambert closed form") {
  for (double p : {0.55, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99}) {
    auto c = shieh_constants(ShiehFamily::double_exponential, p);
    const double closed = -lambert_wm1(4.0 * (p - 1.0) * std::exp(-2.0)) - 2.0;
    CHECK(std::fabs(c.theta - closed) <= 1e-9);
    CHECK((2.0 + c.theta) * std::exp(-c.theta) ==
          doctest::Approx(4.0 * (1.0 - p)).epsilon(1e-12));
  }
}

TEST_CASE("alternative moments") {
  auto c = shieh_constants(ShiehFamily::normal, 0.5);
  auto m65 = alternative_moments(6, 6, 0.5, c);
  CHECK(m65.mu == doctest::Approx(18.0));
  CHECK(m65.sigma * m65.sigma == doctest::Approx(39.0).epsilon(1e-9));

  auto cse = shieh_constants(ShiehFamily::shifted_exponential, 0.8);
  auto alt = alternative_moments(6, 6, 0.8, cse);
  CHECK(alt.mu == doctest::Approx(28.8));
  CHECK(alt.sigma * alt.sigma == doctest::Approx(24.96).epsilon(1e-9));

  // unequal sizes flip the variance when the family is asymmetric
  auto a = alternative_moments(6, 12, 0.8, cse);
  auto b = alternative_moments(12, 6, 0.8, cse);
  CHECK(std::fabs(a.sigma - b.sigma) > 0.1);
}

TEST_CASE("null reduction across sizes and families") {
  for (auto fam : {ShiehFamily::normal, ShiehFamily::shifted_exponential,
                   ShiehFamily::double_exponential}) {
    auto c = shieh_constants(fam, 0.5);
    for (int m : {2, 6, 15, 40}) {
      for (int n : {3, 11, 27}) {
        auto alt = alternative_moments(m, n, 0.5, c);
        const double null_var = double(m) * n * (m + n + 1) / 12.0;
        CHECK(alt.sigma * alt.sigma == doctest::Approx(null_var).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("shieh power reference values") {
  CHECK(percent_round_half_up(shieh_power(0.05, 6, 6, 0.8, ShiehFamily::normal)) == 38);
  CHECK(percent_round_half_up(shieh_power(0.05, 15, 15, 0.7, ShiehFamily::normal)) == 46);
  CHECK(shieh_power(0.05, 6, 6, 0.5, ShiehFamily::normal) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(shieh_power(0.05, 6, 6, 0.8, ShiehFamily::normal) ==
        doctest::Approx(0.3813251).epsilon(1e-6));
  // unequal-size shifted-exponential cells
  CHECK(shieh_power(0.05, 6, 12, 0.9, ShiehFamily::shifted_exponential) ==
        doctest::Approx(0.926346).epsilon(1e-5));
  CHECK(shieh_power(0.05, 12, 6, 0.9, ShiehFamily::shifted_exponential) ==
        doctest::Approx(0.861260).epsilon(1e-5));
}

TEST_CASE("shieh power maps p below one half by relabeling") {
  for (auto fam : {ShiehFamily::normal, ShiehFamily::shifted_exponential,
                   ShiehFamily::double_exponential}) {
    CHECK(shieh_power(0.05, 6, 12, 0.3, fam) ==
          doctest::Approx(shieh_power(0.05, 12, 6, 0.7, fam)).epsilon(1e-13));
  }
  // symmetric family with equal sizes: p and 1-p coincide
  CHECK(shieh_power(0.05, 9, 9, 0.35, ShiehFamily::normal) ==
        doctest::Approx(shieh_power(0.05, 9, 9, 0.65, ShiehFamily::normal)).epsilon(1e-13));
}

TEST_CASE("shieh power is nondecreasing in p") {
  for (auto fam : {ShiehFamily::normal, ShiehFamily::shifted_exponential,
                   ShiehFamily::double_exponential}) {
    double prev = 0.0;
    for (double p = 0.50; p <= 0.951; p += 0.01) {
      const double pw = shieh_power(0.05, 6, 6, p, fam);
      CHECK(pw >= prev - 1e-12);
      prev = pw;
    }
  }
}

TEST_CASE("noether power reference values") {
  CHECK(noether_power(0.05, 6, 6, 0.9) == doctest::Approx(0.6700445).epsilon(1e-6));
  CHECK(noether_power(0.05, 6, 6, 0.7) == doctest::Approx(0.2236381).epsilon(1e-6));
  CHECK(noether_power(0.05, 6, 6, 0.5) == doctest::Approx(0.025).epsilon(1e-12));
  // depends on p only through |p - 0.5|
  CHECK(noether_power(0.05, 8, 14, 0.3) ==
        doctest::Approx(noether_power(0.05, 8, 14, 0.7)).epsilon(1e-14));
  // one-sided variant uses z_alpha
  CHECK(noether_power(0.05, 6, 6, 0.5, Sides::one_sided) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("noether sample size") {
  CHECK(noether_sample_size(0.05, 0.8, 0.5, 0.9) == 17);
  // balanced allocation minimizes N
  const int balanced = noether_sample_size(0.05, 0.8, 0.5, 0.8);
  for (double c : {0.2, 0.35, 0.65, 0.8}) {
    CHECK(noether_sample_size(0.05, 0.8, c, 0.8) >= balanced);
  }
  CHECK_THROWS_AS(noether_sample_size(0.05, 0.8, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(noether_sample_size(0.05, 0.8, 0.5, 0.5 + 1e-9), std::invalid_argument);
}
