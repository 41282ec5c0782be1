#pragma once

namespace wmwpower {

enum class ShiehFamily { normal, shifted_exponential, double_exponential };
enum class Sides { one_sided, two_sided };

// Location-shift constants for the large-sample power approximation.
// theta is the shift of G relative to F in unit-scale coordinates; p2 and p3
// are the pairwise concordance probabilities entering the alternative
// variance. p2 == p3 for the symmetric families.
struct ShiehConstants {
  ShiehFamily family = ShiehFamily::normal;
  double theta = 0.0;
  double p2 = 1.0 / 3.0;
  double p3 = 1.0 / 3.0;
};

// Requires p in [0.5, 1); p < 0.5 is handled upstream by the p -> 1-p,
// m <-> n relabeling in shieh_power.
//   shifted_exponential: theta = -ln(2(1-p)),
//     p2 = 1 - (2/3) e^-theta, p3 = 1 - e^-theta + (1/3) e^-2theta
//   double_exponential:  theta inverts p = 1 - (2+theta) e^-theta / 4
//     (bracketed root find; equals -W_{-1}(4(p-1)e^-2) - 2),
//     p2 = p3 = 1 - (7/12 + theta/2) e^-theta - (1/12) e^-2theta
//   normal: theta = sqrt(2) PhiInv(p), p2 = p3 = E[Phi(Z+theta)^2]
//     (128-node Gauss-Hermite quadrature)
ShiehConstants shieh_constants(ShiehFamily family, double p);

struct AlternativeMoments {
  double mu = 0.0;     // E[W] under the alternative = mn p
  double sigma = 0.0;  // sd of W under the alternative
};

// sigma^2 = mn{ p(1-p) + (m-1)(p2 - p^2) + (n-1)(p3 - p^2) } with m the size
// of the sample drawn from F. This is the pairing used by the published
// reference results; it matches the exact covariance expansion for all
// symmetric families and whenever m == n.
AlternativeMoments alternative_moments(int m, int n, double p, const ShiehConstants& constants);

// Two-sided approximate power
//   Phi((mu - mu0 - z sigma0)/sigma) + Phi((mu0 - mu - z sigma0)/sigma).
double shieh_power(double alpha, int m, int n, double p, ShiehFamily family);

// Phi( sqrt(12 N c (1-c)) |p - 0.5| - z ), c = m/N; z = z_alpha one-sided,
// z_{alpha/2} two-sided.
double noether_power(double alpha, int m, int n, double p, Sides sides = Sides::two_sided);

// Smallest integer N with N >= (z_alpha + z_beta)^2 / (12 c (1-c) (p-0.5)^2).
int noether_sample_size(double alpha, double target_power, double c, double p,
                        Sides sides = Sides::two_sided);

}  // namespace wmwpower
