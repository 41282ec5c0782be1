#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wmwpower/rng.hpp"

namespace wmwpower {

enum class Family {
  normal,
  exponential,
  shifted_exponential,
  double_exponential,
  beta,
  weibull,
  uniform,
  empirical,
};

std::string family_name(Family f);

// A continuous distribution: a parametric family with two parameters, or an
// empirical sample used for resampling with replacement.
//
// Parameter meaning by family:
//   normal               a = mean,  b = sd (> 0)
//   exponential          a = rate (> 0)
//   shifted_exponential  a = rate (> 0), b = shift (>= 0)
//   double_exponential   a = location, b = scale (> 0)
//   beta                 a, b = shape parameters (> 0)
//   weibull              a = shape (> 0), b = scale (> 0)
//   uniform              a = lo, b = hi (a < b)
//   empirical            data = sorted observations (>= 2)
struct DistributionSpec {
  Family family = Family::normal;
  double a = 0.0;
  double b = 1.0;
  std::vector<double> data;

  static DistributionSpec normal(double mu, double sd);
  static DistributionSpec exponential(double rate);
  static DistributionSpec shifted_exponential(double rate, double shift);
  static DistributionSpec double_exponential(double mu, double scale);
  static DistributionSpec beta(double a, double b);
  static DistributionSpec weibull(double shape, double scale);
  static DistributionSpec uniform(double lo, double hi);
  static DistributionSpec empirical(std::vector<double> observations);

  // Throws std::invalid_argument on any parameter-domain violation.
  void validate() const;

  std::string describe() const;
};

double cdf_value(const DistributionSpec& spec, double x);
double pdf_value(const DistributionSpec& spec, double x);
double quantile(const DistributionSpec& spec, double q);

double sample_one(const DistributionSpec& spec, RandomStream& stream);
std::vector<double> sample(const DistributionSpec& spec, size_t count, RandomStream& stream);
void sample_into(const DistributionSpec& spec, double* out, size_t count, RandomStream& stream);

// p = P(X < Y) for X ~ f, Y ~ g. Closed forms for exponential and normal
// pairs; adaptive quadrature of integral g(y) F(y) dy otherwise, absolute
// tolerance 1e-10. Empirical operands are averaged over their observations.
double effect_size_p(const DistributionSpec& f, const DistributionSpec& g);

// Quadrature route regardless of family (used to cross-check closed forms).
double effect_size_p_numeric(const DistributionSpec& f, const DistributionSpec& g);

struct EffectSizeSolution {
  DistributionSpec g;
  double achieved_p = 0.5;
  double k = 1.0;
};

// Constructs G in the same family as f with P(X < Y) = p.
//   exponential:        rate_g = rate_f (1-p)/p          (k ignored)
//   normal:             mu_g = mu_f + PhiInv(p) sqrt(sd_f^2 + sd_g^2), sd_g = k sd_f
//   double_exponential: location solved by bracketed root finding, scale_g = k scale_f
// |achieved_p - p| <= 1e-10.
EffectSizeSolution solve_alternative(const DistributionSpec& f, double p, double k = 1.0);

// One real number per line; blank lines ignored. Throws std::invalid_argument
// naming the offending line on parse failure.
DistributionSpec load_empirical_file(const std::string& path);
DistributionSpec parse_empirical_stream(std::istream& in, const std::string& origin);

}  // namespace wmwpower
