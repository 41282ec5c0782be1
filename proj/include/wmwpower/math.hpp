#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace wmwpower {

inline double normal_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

// Inverse standard normal CDF (Wichura's AS241 PPND16 rational approximations,
// accurate to ~1e-16 relative over (0,1)).
double normal_quantile(double p);

// Real branches of the Lambert W function (w e^w = x).
// w0: x >= -1/e.  wm1: x in [-1/e, 0).
double lambert_w0(double x);
double lambert_wm1(double x);

// Brent's method on [a, b]; f(a) and f(b) must bracket a root.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-14, int max_iter = 200);

// Adaptive Gauss-Kronrod 15(7) quadrature of f over [a, b] to an absolute
// tolerance. Throws numerical_error if the recursion depth is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-11);

// Gauss-Hermite rule with n nodes for the weight e^{-t^2} on (-inf, inf).
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const HermiteRule& hermite_rule(int n);

// E[f(Z)] for Z ~ N(0,1) via an n-node Gauss-Hermite rule.
double gauss_hermite_expectation(const std::function<double(double)>& f, int n = 128);

}  // namespace wmwpower
