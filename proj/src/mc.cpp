#include "wmwpower/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "wmwpower/errors.hpp"
#include "wmwpower/math.hpp"

namespace wmwpower {

void StudyDesign::validate() const {
  if (m < 2 || n < 2) throw std::invalid_argument("StudyDesign: group sizes must be >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("StudyDesign: alpha must lie in (0,1)");
  }
}

long long default_replicates(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("default_replicates: sizes must be >= 1");
  return (m < 20 && n < 20) ? 100000 : 10000;
}

Interval wald_ci(long long q, long long s, double level) {
  if (s < 1 || q < 0 || q > s) throw std::invalid_argument("wald_ci: need 0 <= q <= s, s >= 1");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("wald_ci: level must lie in (0,1)");
  }
  const double p_hat = double(q) / double(s);
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / double(s));
  return {std::max(0.0, p_hat - half), std::min(1.0, p_hat + half)};
}

namespace {

// Precomputed rejection rule so the replicate loop never builds p-values.
struct RejectionRule {
  long long w_hi = 0;  // reject when W >= w_hi or W <= w_lo
  long long w_lo = 0;

  bool rejects(long long w) const { return w >= w_hi || w <= w_lo; }
};

RejectionRule make_rule(const StudyDesign& design) {
  TestMethod method = design.test_method;
  if (method == TestMethod::automatic) {
    method = (std::max(design.m, design.n) <= kDefaultExactLimit) ? TestMethod::exact
                                                                  : TestMethod::normal_approx;
  }
  const long long mn = (long long)design.m * design.n;
  RejectionRule rule;
  if (method == TestMethod::exact) {
    const auto table = shared_null_table(design.m, design.n,
                                         std::max(kDefaultExactLimit, std::max(design.m, design.n)));
    rule.w_hi = exact_upper_critical(*table, design.alpha);
  } else {
    // 2 Phi(-(dev - 0.5)/sigma0) <= alpha  <=>  dev >= 0.5 + z sigma0
    const double mu0 = 0.5 * double(design.m) * design.n;
    const double sigma0 = std::sqrt(double(design.m) * design.n * (design.m + design.n + 1) / 12.0);
    const double z = normal_quantile(1.0 - design.alpha / 2.0);
    rule.w_hi = (long long)std::ceil(mu0 + 0.5 + z * sigma0 - 1e-12);
  }
  rule.w_lo = mn - rule.w_hi;
  return rule;
}

}  // namespace

PowerEstimate empirical_power(const DistributionSpec& f, const DistributionSpec& g,
                              const StudyDesign& design, long long s, uint64_t seed,
                              int n_threads) {
  design.validate();
  f.validate();
  g.validate();
  if (s < 100) throw std::invalid_argument("empirical_power: need at least 100 replicates");

  const RejectionRule rule = make_rule(design);
  if (n_threads <= 0) {
    n_threads = int(std::max(1u, std::thread::hardware_concurrency()));
  }
  n_threads = int(std::min<long long>(n_threads, s));

  std::atomic<long long> total_rejections{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&](long long begin, long long end) {
    try {
      std::vector<double> xs(size_t(design.m));
      std::vector<double> ys(size_t(design.n));
      long long local = 0;
      for (long long r = begin; r < end; ++r) {
        RandomStream stream = RandomStream::substream(seed, uint64_t(r));
        sample_into(f, xs.data(), xs.size(), stream);
        sample_into(g, ys.data(), ys.size(), stream);
        if (rule.rejects(statistic_w(xs, ys))) ++local;
      }
      total_rejections.fetch_add(local, std::memory_order_relaxed);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (n_threads == 1) {
    worker(0, s);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(size_t(n_threads));
    const long long chunk = (s + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const long long begin = t * chunk;
      const long long end = std::min(s, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  PowerEstimate est;
  est.q = total_rejections.load();
  est.s = s;
  est.p_hat = double(est.q) / double(s);
  est.se_bound = 1.0 / std::sqrt(4.0 * double(s));
  est.wald_ci_99 = wald_ci(est.q, est.s, 0.99);
  est.effect_size_p = effect_size_p(f, g);
  est.odds = est.effect_size_p / (1.0 - est.effect_size_p);
  est.seed = seed;
  est.design = design;
  return est;
}

PowerEstimate empirical_power_from_p(const DistributionSpec& f, double p, double k,
                                     const StudyDesign& design, long long s, uint64_t seed,
                                     int n_threads) {
  const EffectSizeSolution sol = solve_alternative(f, p, k);
  return empirical_power(f, sol.g, design, s, seed, n_threads);
}

}  // namespace wmwpower
