#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wmwpower/analytic.hpp"
#include "wmwpower/distribution.hpp"
#include "wmwpower/errors.hpp"
#include "wmwpower/mc.hpp"
#include "wmwpower/report.hpp"
#include "wmwpower/sweep.hpp"

namespace {

using namespace wmwpower;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct DistFlags {
  std::string family;
  std::optional<double> mu, sd, rate, shift, scale, shape, a, b, lo, hi;
  std::string data_path;

  void add_options(CLI::App* cmd, const std::string& prefix, bool required) {
    auto flag = [&](const std::string& name) { return "--" + prefix + name; };
    auto* fam = cmd->add_option(flag("family"), family,
                                "normal|exp|shifted-exp|laplace|beta|weibull|uniform|empirical");
    if (required) fam->required();
    cmd->add_option(flag("mu"), mu, "location (normal, laplace)");
    cmd->add_option(flag("sd"), sd, "standard deviation (normal)");
    cmd->add_option(flag("rate"), rate, "rate (exp, shifted-exp)");
    cmd->add_option(flag("shift"), shift, "support shift (shifted-exp)");
    cmd->add_option(flag("scale"), scale, "scale (laplace, weibull)");
    cmd->add_option(flag("shape"), shape, "shape (weibull)");
    cmd->add_option(flag("a"), a, "first shape (beta)");
    cmd->add_option(flag("b"), b, "second shape (beta)");
    cmd->add_option(flag("lo"), lo, "lower bound (uniform)");
    cmd->add_option(flag("hi"), hi, "upper bound (uniform)");
    cmd->add_option(flag("data"), data_path, "file with one observation per line (empirical)");
  }

  DistributionSpec build() const {
    auto used = [&](std::initializer_list<const std::optional<double>*> allowed) {
      // reject parameters that do not belong to the chosen family
      const std::map<std::string, const std::optional<double>*> all = {
          {"mu", &mu},     {"sd", &sd},     {"rate", &rate}, {"shift", &shift},
          {"scale", &scale}, {"shape", &shape}, {"a", &a},   {"b", &b},
          {"lo", &lo},     {"hi", &hi}};
      for (const auto& [name, ptr] : all) {
        bool ok = false;
        for (const auto* al : allowed)
          if (al == ptr) ok = true;
        if (!ok && ptr->has_value()) {
          throw std::invalid_argument("flag --" + name + " does not apply to family '" +
                                      family + "'");
        }
      }
    };
    if (family == "normal") {
      used({&mu, &sd});
      return DistributionSpec::normal(mu.value_or(0.0), sd.value_or(1.0));
    }
    if (family == "exp" || family == "exponential") {
      used({&rate});
      return DistributionSpec::exponential(rate.value_or(1.0));
    }
    if (family == "shifted-exp" || family == "shifted_exp") {
      used({&rate, &shift});
      return DistributionSpec::shifted_exponential(rate.value_or(1.0), shift.value_or(0.0));
    }
    if (family == "laplace" || family == "double-exp" || family == "doublex") {
      used({&mu, &scale});
      return DistributionSpec::double_exponential(mu.value_or(0.0), scale.value_or(1.0));
    }
    if (family == "beta") {
      used({&a, &b});
      if (!a || !b) throw std::invalid_argument("beta requires --a and --b");
      return DistributionSpec::beta(*a, *b);
    }
    if (family == "weibull") {
      used({&shape, &scale});
      if (!shape || !scale) throw std::invalid_argument("weibull requires --shape and --scale");
      return DistributionSpec::weibull(*shape, *scale);
    }
    if (family == "uniform") {
      used({&lo, &hi});
      return DistributionSpec::uniform(lo.value_or(0.0), hi.value_or(1.0));
    }
    if (family == "empirical") {
      used({});
      if (data_path.empty()) throw std::invalid_argument("empirical requires --data <path>");
      return load_empirical_file(data_path);
    }
    throw std::invalid_argument("unknown family '" + family + "'");
  }
};

struct CommonFlags {
  int m = 0, n = 0;
  double alpha = 0.05;
  long long reps = 0;
  uint64_t seed = 1;
  int threads = 0;
  std::string format = "text";
  std::string out_path;

  void add_design(CLI::App* cmd) {
    cmd->add_option("--m", m, "size of the sample drawn from F")->required();
    cmd->add_option("--n", n, "size of the sample drawn from G")->required();
    cmd->add_option("--alpha", alpha, "two-sided significance level (default 0.05)");
  }
  void add_mc(CLI::App* cmd) {
    cmd->add_option("--reps", reps, "Monte Carlo replicates (default: 100000 if m,n < 20 else 10000)");
    cmd->add_option("--seed", seed, "RNG seed (default 1)");
    cmd->add_option("--threads", threads, "worker threads (default: hardware)");
  }
  void add_output(CLI::App* cmd, const std::string& formats) {
    cmd->add_option("--format", format, "output format: " + formats);
    cmd->add_option("--out", out_path, "write output to file instead of stdout");
  }
};

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("p must lie in the open interval (0,1)");
  }
}

void emit(const CommonFlags& common, const std::string& text) {
  if (common.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(common.out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + common.out_path);
  out << text;
}

std::string describe_method(const StudyDesign& d) {
  if (d.test_method == TestMethod::exact) return "exact";
  if (d.test_method == TestMethod::normal_approx) return "normal-approx";
  return (std::max(d.m, d.n) <= kDefaultExactLimit) ? "exact (auto)" : "normal-approx (auto)";
}

std::string estimate_report(const PowerEstimate& est, const DistributionSpec& f,
                            const DistributionSpec& g, bool solved) {
  std::ostringstream out;
  out << "F: " << f.describe() << "\n";
  out << "G" << (solved ? " (solved)" : "") << ": " << g.describe() << "\n";
  out << "p = P(X<Y): " << format_double(est.effect_size_p)
      << "   odds: " << format_double(est.odds) << "\n";
  out << "design: m=" << est.design.m << " n=" << est.design.n
      << " alpha=" << format_double(est.design.alpha) << " test=" << describe_method(est.design)
      << "\n";
  out << "replicates: " << est.s << "   seed: " << est.seed << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "power: %s (%s%%)\n", format_double(est.p_hat).c_str(),
                percent_display(est.p_hat).c_str());
  out << line;
  std::snprintf(line, sizeof line, "99%% Wald CI: (%s, %s)\n",
                format_double(est.wald_ci_99.lo).c_str(),
                format_double(est.wald_ci_99.hi).c_str());
  out << line;
  out << "SE bound: " << format_double(est.se_bound) << "\n";
  return out.str();
}

nlohmann::json estimate_json(const PowerEstimate& est, const DistributionSpec& f,
                             const DistributionSpec& g) {
  nlohmann::json obj;
  obj["f"] = f.describe();
  obj["g"] = g.describe();
  obj["m"] = est.design.m;
  obj["n"] = est.design.n;
  obj["alpha"] = est.design.alpha;
  obj["power"] = est.p_hat;
  obj["rejections"] = est.q;
  obj["replicates"] = est.s;
  obj["ci99_lo"] = est.wald_ci_99.lo;
  obj["ci99_hi"] = est.wald_ci_99.hi;
  obj["se_bound"] = est.se_bound;
  obj["p"] = est.effect_size_p;
  obj["odds"] = est.odds;
  obj["seed"] = est.seed;
  return obj;
}

SweepRow estimate_row(const PowerEstimate& est, const std::string& family) {
  SweepRow row;
  row.m = est.design.m;
  row.n = est.design.n;
  row.alpha = est.design.alpha;
  row.p = est.effect_size_p;
  row.k = 1.0;
  row.family = family;
  row.method = "empirical";
  row.power = est.p_hat;
  row.ci_lo = est.wald_ci_99.lo;
  row.ci_hi = est.wald_ci_99.hi;
  row.s = est.s;
  row.seed = est.seed;
  return row;
}

void emit_estimate(const CommonFlags& common, const PowerEstimate& est,
                   const DistributionSpec& f, const DistributionSpec& g, bool solved) {
  if (common.format == "text") {
    emit(common, estimate_report(est, f, g, solved));
  } else if (common.format == "json") {
    emit(common, estimate_json(est, f, g).dump(2) + "\n");
  } else if (common.format == "csv") {
    emit(common, to_csv({estimate_row(est, family_name(f.family))}));
  } else {
    throw std::invalid_argument("unknown format '" + common.format + "'");
  }
}

long long pick_reps(const CommonFlags& common) {
  if (common.reps != 0) {
    if (common.reps < 100) throw std::invalid_argument("--reps must be at least 100");
    return common.reps;
  }
  return default_replicates(common.m, common.n);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Power of the two-sided Wilcoxon Mann-Whitney rank-sum test"};
  app.require_subcommand(1);

  // ---- power-p ----------------------------------------------------------
  auto* pp = app.add_subcommand(
      "power-p", "empirical power from a base distribution F and effect size p = P(X<Y)");
  DistFlags pp_dist;
  pp_dist.add_options(pp, "", true);
  double pp_p = 0.0, pp_k = 1.0;
  pp->add_option("--p", pp_p, "target effect size P(X<Y) in (0,1)")->required();
  pp->add_option("--k", pp_k, "sd ratio sigma_y / sigma_x (normal, laplace; default 1)");
  CommonFlags pp_common;
  pp_common.add_design(pp);
  pp_common.add_mc(pp);
  pp_common.add_output(pp, "text|json|csv");

  // ---- power-d ----------------------------------------------------------
  auto* pd = app.add_subcommand("power-d",
                                "empirical power for fully specified distributions F and G");
  DistFlags pd_f, pd_g;
  pd_f.add_options(pd, "f-", true);
  pd_g.add_options(pd, "g-", true);
  CommonFlags pd_common;
  pd_common.add_design(pd);
  pd_common.add_mc(pd);
  pd_common.add_output(pd, "text|json|csv");

  // ---- shieh ------------------------------------------------------------
  auto* sh = app.add_subcommand("shieh", "location-shift power approximation");
  std::string sh_family;
  double sh_p = 0.0;
  sh->add_option("--family", sh_family, "normal|shifted-exp|laplace")->required();
  sh->add_option("--p", sh_p, "effect size P(X<Y) in (0,1)")->required();
  CommonFlags sh_common;
  sh_common.add_design(sh);
  sh_common.add_output(sh, "text|json|csv");

  // ---- noether ----------------------------------------------------------
  auto* no = app.add_subcommand(
      "noether", "distribution-free power approximation / sample-size determination");
  double no_p = 0.0;
  no->add_option("--p", no_p, "effect size P(X<Y) in (0,1)")->required();
  std::optional<double> no_target_power;
  std::optional<double> no_c;
  no->add_option("--target-power", no_target_power, "solve for total N at this power");
  no->add_option("--c", no_c, "allocation fraction m/N for sample-size mode (default 0.5)");
  int no_m = 0, no_n = 0;
  double no_alpha = 0.05;
  no->add_option("--m", no_m, "size of the sample drawn from F");
  no->add_option("--n", no_n, "size of the sample drawn from G");
  no->add_option("--alpha", no_alpha, "two-sided significance level (default 0.05)");
  CommonFlags no_common;
  no_common.add_output(no, "text|json|csv");

  // ---- sweep ------------------------------------------------------------
  auto* sw = app.add_subcommand("sweep", "grid of power evaluations (CSV or JSON)");
  std::string sw_preset;
  sw->add_option("--preset", sw_preset, "table1|fig2|fig1a");
  std::vector<int> sw_ms, sw_ns;
  sw->add_option("--m-list", sw_ms, "F-sample sizes (crossed with --n-list)");
  sw->add_option("--n-list", sw_ns, "G-sample sizes");
  std::vector<double> sw_ps, sw_ks;
  sw->add_option("--p-list", sw_ps, "effect sizes (default 0.50..0.95 step 0.05)");
  sw->add_option("--k-list", sw_ks, "sd ratios (default 1)");
  std::vector<std::string> sw_methods, sw_families;
  sw->add_option("--methods", sw_methods, "subset of empirical,shieh,noether (default all)");
  sw->add_option("--families", sw_families, "subset of normal,exp,laplace (default normal)");
  double sw_alpha = 0.05;
  sw->add_option("--alpha", sw_alpha, "two-sided significance level (default 0.05)");
  CommonFlags sw_common;
  sw_common.format = "csv";
  sw->add_option("--reps", sw_common.reps, "replicates per empirical cell (default per design)");
  sw->add_option("--seed", sw_common.seed, "RNG seed (default 1)");
  sw->add_option("--threads", sw_common.threads, "worker threads (default: hardware)");
  sw_common.add_output(sw, "csv|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  if (pp->parsed()) {
    check_p(pp_p);
    const DistributionSpec f = pp_dist.build();
    const EffectSizeSolution sol = solve_alternative(f, pp_p, pp_k);
    StudyDesign design{pp_common.m, pp_common.n, pp_common.alpha, TestMethod::automatic};
    const PowerEstimate est = empirical_power(f, sol.g, design, pick_reps(pp_common),
                                              pp_common.seed, pp_common.threads);
    emit_estimate(pp_common, est, f, sol.g, /*solved=*/true);
    return kExitOk;
  }

  if (pd->parsed()) {
    const DistributionSpec f = pd_f.build();
    const DistributionSpec g = pd_g.build();
    StudyDesign design{pd_common.m, pd_common.n, pd_common.alpha, TestMethod::automatic};
    const PowerEstimate est = empirical_power(f, g, design, pick_reps(pd_common), pd_common.seed,
                                              pd_common.threads);
    emit_estimate(pd_common, est, f, g, /*solved=*/false);
    return kExitOk;
  }

  if (sh->parsed()) {
    check_p(sh_p);
    ShiehFamily family;
    if (sh_family == "normal") family = ShiehFamily::normal;
    else if (sh_family == "shifted-exp" || sh_family == "shifted_exp" || sh_family == "exp")
      family = ShiehFamily::shifted_exponential;
    else if (sh_family == "laplace") family = ShiehFamily::double_exponential;
    else throw std::invalid_argument("shieh family must be normal, shifted-exp or laplace");
    const double power = shieh_power(sh_common.alpha, sh_common.m, sh_common.n, sh_p, family);
    const ShiehConstants c = shieh_constants(family, sh_p < 0.5 ? 1.0 - sh_p : sh_p);
    if (sh_common.format == "text") {
      std::ostringstream out;
      out << "family: " << sh_family << "\n";
      out << "design: m=" << sh_common.m << " n=" << sh_common.n
          << " alpha=" << format_double(sh_common.alpha) << "\n";
      out << "p: " << format_double(sh_p) << "   theta: " << format_double(c.theta)
          << "   p2: " << format_double(c.p2) << "   p3: " << format_double(c.p3) << "\n";
      char line[96];
      std::snprintf(line, sizeof line, "power: %s (%s%%)\n", format_double(power).c_str(),
                    percent_display(power).c_str());
      out << line;
      emit(sh_common, out.str());
    } else if (sh_common.format == "json") {
      nlohmann::json obj{{"family", sh_family}, {"m", sh_common.m},     {"n", sh_common.n},
                         {"alpha", sh_common.alpha}, {"p", sh_p},       {"theta", c.theta},
                         {"p2", c.p2},          {"p3", c.p3},           {"power", power}};
      emit(sh_common, obj.dump(2) + "\n");
    } else if (sh_common.format == "csv") {
      SweepRow row;
      row.m = sh_common.m;
      row.n = sh_common.n;
      row.alpha = sh_common.alpha;
      row.p = sh_p;
      row.k = 1.0;
      row.family = (family == ShiehFamily::normal)
                       ? "normal"
                       : (family == ShiehFamily::double_exponential ? "laplace" : "shifted_exp");
      row.method = "shieh";
      row.power = row.ci_lo = row.ci_hi = power;
      row.s = 0;
      row.seed = 0;
      emit(sh_common, to_csv({row}));
    } else {
      throw std::invalid_argument("unknown format '" + sh_common.format + "'");
    }
    return kExitOk;
  }

  if (no->parsed()) {
    check_p(no_p);
    if (no_target_power) {
      const double c = no_c.value_or(0.5);
      const int total = noether_sample_size(no_alpha, *no_target_power, c, no_p,
                                            Sides::two_sided);
      if (no_common.format == "json") {
        nlohmann::json obj{{"alpha", no_alpha},  {"target_power", *no_target_power},
                           {"c", c},             {"p", no_p},
                           {"total_n", total}};
        emit(no_common, obj.dump(2) + "\n");
      } else {
        std::ostringstream out;
        out << "alpha=" << format_double(no_alpha) << " target power="
            << format_double(*no_target_power) << " c=" << format_double(c)
            << " p=" << format_double(no_p) << "\n";
        out << "total N: " << total << "\n";
        emit(no_common, out.str());
      }
      return kExitOk;
    }
    if (no_m < 1 || no_n < 1) {
      throw std::invalid_argument("noether power mode requires --m and --n");
    }
    const double power = noether_power(no_alpha, no_m, no_n, no_p, Sides::two_sided);
    if (no_common.format == "json") {
      nlohmann::json obj{
          {"m", no_m}, {"n", no_n}, {"alpha", no_alpha}, {"p", no_p}, {"power", power}};
      emit(no_common, obj.dump(2) + "\n");
    } else if (no_common.format == "csv") {
      SweepRow row;
      row.m = no_m;
      row.n = no_n;
      row.alpha = no_alpha;
      row.p = no_p;
      row.k = 1.0;
      row.family = "none";
      row.method = "noether";
      row.power = row.ci_lo = row.ci_hi = power;
      row.s = 0;
      row.seed = 0;
      emit(no_common, to_csv({row}));
    } else {
      std::ostringstream out;
      out << "design: m=" << no_m << " n=" << no_n << " alpha=" << format_double(no_alpha)
          << "\n";
      char line[96];
      std::snprintf(line, sizeof line, "power: %s (%s%%)\n", format_double(power).c_str(),
                    percent_display(power).c_str());
      out << line;
      emit(no_common, out.str());
    }
    return kExitOk;
  }

  if (sw->parsed()) {
    std::vector<SweepJob> jobs;
    if (!sw_preset.empty()) {
      if (sw_preset == "table1") jobs = table1_jobs();
      else if (sw_preset == "fig2") jobs = fig2_jobs();
      else if (sw_preset == "fig1a") jobs = fig1a_jobs();
      else throw std::invalid_argument("unknown preset '" + sw_preset + "'");
    } else {
      SweepRequest request;
      if (sw_ms.empty() || sw_ns.empty()) {
        throw std::invalid_argument("sweep needs --preset or both --m-list and --n-list");
      }
      for (int m : sw_ms)
        for (int n : sw_ns) request.designs.emplace_back(m, n);
      if (!sw_ps.empty()) request.ps = sw_ps;
      if (!sw_ks.empty()) request.ks = sw_ks;
      if (sw->count("--methods") > 0) {
        request.methods.clear();
        for (const std::string& name : sw_methods) {
          if (name == "empirical") request.methods.push_back(MethodKind::empirical);
          else if (name == "shieh") request.methods.push_back(MethodKind::shieh);
          else if (name == "noether") request.methods.push_back(MethodKind::noether);
          else throw std::invalid_argument("unknown method '" + name + "'");
        }
      }
      if (sw->count("--families") > 0) {
        request.families.clear();
        for (const std::string& name : sw_families) {
          if (name == "normal") request.families.push_back(Family::normal);
          else if (name == "exp") request.families.push_back(Family::exponential);
          else if (name == "laplace") request.families.push_back(Family::double_exponential);
          else throw std::invalid_argument("unknown family '" + name + "' (normal|exp|laplace)");
        }
      }
      request.alpha = sw_alpha;
      jobs = request.expand();
    }
    SweepOptions options{sw_common.seed, sw_common.reps, sw_common.threads};
    const std::vector<SweepRow> rows = run_sweep(jobs, options);
    long long failures = 0;
    for (const SweepRow& row : rows) {
      if (row.failed) {
        ++failures;
        std::cerr << "row failed (m=" << row.m << " n=" << row.n << " p=" << row.p
                  << " method=" << row.method << "): " << row.error << "\n";
      }
    }
    if (sw_common.format == "csv") emit(sw_common, to_csv(rows));
    else if (sw_common.format == "json") emit(sw_common, to_json(rows));
    else throw std::invalid_argument("sweep format must be csv or json");
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const wmwpower::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const wmwpower::capability_error& e) {
    std::cerr << "unsupported request: " << e.what() << "\n";
    return kExitUsage;
  } catch (const wmwpower::tie_error& e) {
    std::cerr << "tie error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
