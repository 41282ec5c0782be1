#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wmwpower/analytic.hpp"
#include "wmwpower/distribution.hpp"

namespace wmwpower {

enum class MethodKind { empirical, shieh, noether };

std::string method_name(MethodKind m);

// One power evaluation. For empirical jobs `family` selects the base F
// (normal(0,1), exp(1) or laplace(0,1)) and G is solved from (p, k). Shieh
// jobs use the location-shift family (exp means shifted exponential);
// noether jobs are distribution-free.
struct SweepJob {
  int m = 2;
  int n = 2;
  double alpha = 0.05;
  double p = 0.5;
  double k = 1.0;
  MethodKind method = MethodKind::empirical;
  Family family = Family::normal;
};

struct SweepRow {
  int m = 0;
  int n = 0;
  double alpha = 0.05;
  double p = 0.5;
  double k = 1.0;
  std::string family;
  std::string method;
  double power = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  long long s = 0;
  uint64_t seed = 0;
  bool failed = false;
  std::string error;
};

struct SweepRequest {
  std::vector<std::pair<int, int>> designs;
  std::vector<double> ps = {0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
  std::vector<double> ks = {1.0};
  std::vector<MethodKind> methods = {MethodKind::empirical, MethodKind::shieh,
                                     MethodKind::noether};
  std::vector<Family> families = {Family::normal};
  double alpha = 0.05;

  std::vector<SweepJob> expand() const;  // throws on empty grids
};

struct SweepOptions {
  uint64_t seed = 1;
  long long reps = 0;  // 0 = default_replicates(m, n) per job
  int threads = 0;     // 0 = hardware concurrency
};

// Published reference-table grid: the two equal-size designs with all three
// families plus the two unequal exponential designs.
std::vector<SweepJob> table1_jobs();
// Unequal-variance sweep: normal family, k = 1..4, both equal-size designs.
std::vector<SweepJob> fig2_jobs();
// Exact power by sample size: normal family, m = n = 6..15, large effects.
std::vector<SweepJob> fig1a_jobs();

std::vector<SweepRow> run_sweep(const std::vector<SweepJob>& jobs, const SweepOptions& options);

// Fixed column order: m,n,alpha,p,k,family,method,power,ci_lo,ci_hi,s,seed.
// UTF-8, LF line endings, full-precision reals.
std::string to_csv(const std::vector<SweepRow>& rows);
std::string to_json(const std::vector<SweepRow>& rows);

std::vector<SweepRow> parse_csv(const std::string& text);
std::vector<SweepRow> parse_json(const std::string& text);

}  // namespace wmwpower
