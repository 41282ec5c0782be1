#include "wmwpower/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "wmwpower/errors.hpp"
#include "wmwpower/math.hpp"

namespace wmwpower {

namespace {

// p = P(X < Y) for unit-scale Laplace with location shift theta >= 0.
double laplace_shift_to_p(double theta) {
  return 1.0 - 0.25 * (2.0 + theta) * std::exp(-theta);
}

double laplace_theta_for_p(double p) {
  if (p == 0.5) return 0.0;
  double hi = 1.0;
  while (laplace_shift_to_p(hi) < p) {
    hi *= 2.0;
    if (hi > 1e4) throw numerical_error("laplace theta: bracket expansion failed");
  }
  return brent_root([&](double t) { return laplace_shift_to_p(t) - p; }, 0.0, hi, 1e-15);
}

}  // namespace

ShiehConstants shieh_constants(ShiehFamily family, double p) {
  if (!(p >= 0.5 && p < 1.0)) {
    throw std::invalid_argument("shieh_constants: p must lie in [0.5, 1)");
  }
  ShiehConstants c;
  c.family = family;
  switch (family) {
    case ShiehFamily::shifted_exponential: {
      c.theta = -std::log(2.0 * (1.0 - p));
      const double e = std::exp(-c.theta);
      c.p2 = 1.0 - (2.0 / 3.0) * e;
      c.p3 = 1.0 - e + (1.0 / 3.0) * e * e;
      break;
    }
    case ShiehFamily::double_exponential: {
      c.theta = laplace_theta_for_p(p);
      const double e = std::exp(-c.theta);
      c.p2 = c.p3 = 1.0 - (7.0 / 12.0 + 0.5 * c.theta) * e - (1.0 / 12.0) * e * e;
      break;
    }
    case ShiehFamily::normal: {
      const double theta = std::sqrt(2.0) * normal_quantile(p);
      c.theta = theta;
      c.p2 = c.p3 = gauss_hermite_expectation(
          [theta](double z) {
            const double v = normal_cdf(z + theta);
            return v * v;
          },
          128);
      break;
    }
  }
  return c;
}

AlternativeMoments alternative_moments(int m, int n, double p, const ShiehConstants& constants) {
  if (m < 1 || n < 1) throw std::invalid_argument("alternative_moments: sizes must be >= 1");
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("alternative_moments: p must lie in (0,1)");
  }
  const double mn = double(m) * n;
  const double var = mn * (p * (1.0 - p) + (m - 1) * (constants.p2 - p * p) +
                           (n - 1) * (constants.p3 - p * p));
  if (!(var > 0.0)) {
    throw numerical_error("alternative_moments: nonpositive variance from supplied constants");
  }
  return {mn * p, std::sqrt(var)};
}

double shieh_power(double alpha, int m, int n, double p, ShiehFamily family) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("shieh_power: alpha must lie in (0,1)");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("shieh_power: p must lie in (0,1)");
  }
  if (p < 0.5) {
    // swap group labels so the shift is positive
    return shieh_power(alpha, n, m, 1.0 - p, family);
  }
  const ShiehConstants constants = shieh_constants(family, p);
  const AlternativeMoments alt = alternative_moments(m, n, p, constants);
  const double mu0 = 0.5 * double(m) * n;
  const double sigma0 = std::sqrt(double(m) * n * (m + n + 1) / 12.0);
  const double z = normal_quantile(1.0 - alpha / 2.0);
  return normal_cdf((alt.mu - mu0 - z * sigma0) / alt.sigma) +
         normal_cdf((mu0 - alt.mu - z * sigma0) / alt.sigma);
}

double noether_power(double alpha, int m, int n, double p, Sides sides) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("noether_power: alpha must lie in (0,1)");
  }
  if (m < 1 || n < 1) throw std::invalid_argument("noether_power: sizes must be >= 1");
  const double N = m + n;
  const double c = double(m) / N;
  const double z =
      normal_quantile(sides == Sides::two_sided ? 1.0 - alpha / 2.0 : 1.0 - alpha);
  return normal_cdf(std::sqrt(12.0 * N * c * (1.0 - c)) * std::fabs(p - 0.5) - z);
}

int noether_sample_size(double alpha, double target_power, double c, double p, Sides sides) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("noether_sample_size: alpha must lie in (0,1)");
  }
  if (!(target_power > 0.0 && target_power < 1.0)) {
    throw std::invalid_argument("noether_sample_size: target power must lie in (0,1)");
  }
  if (!(c > 0.0 && c < 1.0)) {
    throw std::invalid_argument("noether_sample_size: allocation c must lie in (0,1)");
  }
  if (std::fabs(p - 0.5) < 1e-6) {
    throw std::invalid_argument("noether_sample_size: diverges as p -> 0.5");
  }
  const double za =
      normal_quantile(sides == Sides::two_sided ? 1.0 - alpha / 2.0 : 1.0 - alpha);
  const double zb = normal_quantile(target_power);
  const double num = (za + zb) * (za + zb);
  const double den = 12.0 * c * (1.0 - c) * (p - 0.5) * (p - 0.5);
  return int(std::ceil(num / den - 1e-12));
}

}  // namespace wmwpower
