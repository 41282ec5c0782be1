#pragma once

#include <cstdint>
#include <utility>

#include "wmwpower/distribution.hpp"
#include "wmwpower/wmw_test.hpp"

namespace wmwpower {

struct StudyDesign {
  int m = 2;      // draws from F per replicate
  int n = 2;      // draws from G per replicate
  double alpha = 0.05;
  TestMethod test_method = TestMethod::automatic;

  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct PowerEstimate {
  double p_hat = 0.0;        // Q / S
  long long q = 0;           // rejections
  long long s = 0;           // replicates
  double se_bound = 0.0;     // 1 / sqrt(4S)
  Interval wald_ci_99;
  double effect_size_p = 0.5;
  double odds = 1.0;         // p / (1 - p)
  uint64_t seed = 0;
  StudyDesign design;
};

// 100,000 replicates when both groups are below 20, else 10,000.
long long default_replicates(int m, int n);

// p_hat +/- z_{(1+level)/2} sqrt(p_hat(1-p_hat)/s), clipped to [0,1].
Interval wald_ci(long long q, long long s, double level);

// Rejection fraction of the two-sided test over s simulated datasets.
// Deterministic for fixed (seed, s, design, f, g) regardless of n_threads:
// replicate r always draws from RandomStream::substream(seed, r).
PowerEstimate empirical_power(const DistributionSpec& f, const DistributionSpec& g,
                              const StudyDesign& design, long long s, uint64_t seed,
                              int n_threads = 0);

// solve_alternative(f, p, k) composed with empirical_power.
PowerEstimate empirical_power_from_p(const DistributionSpec& f, double p, double k,
                                     const StudyDesign& design, long long s, uint64_t seed,
                                     int n_threads = 0);

}  // namespace wmwpower
