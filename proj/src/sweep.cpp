#include "wmwpower/sweep.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wmwpower/mc.hpp"
#include "wmwpower/report.hpp"
#include "wmwpower/rng.hpp"

namespace wmwpower {

std::string method_name(MethodKind m) {
  switch (m) {
    case MethodKind::empirical: return "empirical";
    case MethodKind::shieh: return "shieh";
    case MethodKind::noether: return "noether";
  }
  return "?";
}

std::vector<SweepJob> SweepRequest::expand() const {
  if (designs.empty()) throw std::invalid_argument("sweep: design grid is empty");
  if (ps.empty()) throw std::invalid_argument("sweep: p grid is empty");
  if (ks.empty()) throw std::invalid_argument("sweep: k grid is empty");
  if (methods.empty()) throw std::invalid_argument("sweep: method list is empty");
  if (families.empty()) throw std::invalid_argument("sweep: family list is empty");
  for (double p : ps) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("sweep: p values must lie in (0,1)");
  }

  std::vector<SweepJob> jobs;
  for (const auto& [m, n] : designs) {
    for (MethodKind method : methods) {
      if (method == MethodKind::noether) {
        for (double p : ps) jobs.push_back({m, n, alpha, p, 1.0, method, Family::normal});
        continue;
      }
      for (Family family : families) {
        for (double k : ks) {
          // the location-shift approximation has no unequal-variance form
          if (method == MethodKind::shieh && k != 1.0) continue;
          for (double p : ps) jobs.push_back({m, n, alpha, p, k, method, family});
        }
      }
    }
  }
  return jobs;
}

namespace {

const std::vector<double> kTablePs = {0.5, 0.7, 0.75, 0.8, 0.85, 0.9};

void push_block(std::vector<SweepJob>& jobs, int m, int n, bool full) {
  if (full) {
    for (double p : kTablePs) jobs.push_back({m, n, 0.05, p, 1.0, MethodKind::noether, Family::normal});
    for (Family fam : {Family::normal, Family::exponential, Family::double_exponential}) {
      for (double p : kTablePs) jobs.push_back({m, n, 0.05, p, 1.0, MethodKind::empirical, fam});
    }
    for (Family fam : {Family::normal, Family::exponential, Family::double_exponential}) {
      for (double p : kTablePs) jobs.push_back({m, n, 0.05, p, 1.0, MethodKind::shieh, fam});
    }
  } else {
    for (double p : kTablePs) {
      jobs.push_back({m, n, 0.05, p, 1.0, MethodKind::empirical, Family::exponential});
    }
    for (double p : kTablePs) {
      jobs.push_back({m, n, 0.05, p, 1.0, MethodKind::shieh, Family::exponential});
    }
  }
}

uint64_t job_seed(const SweepJob& job, uint64_t run_seed) {
  // coordinate-keyed so any subset of a plan reproduces the same rows
  std::ostringstream key;
  key << job.m << '/' << job.n << '/' << format_double(job.alpha) << '/' << format_double(job.p)
      << '/' << format_double(job.k) << '/' << method_name(job.method) << '/'
      << family_name(job.family);
  uint64_t h = 1469598103934665603ULL;
  for (char c : key.str()) {
    h ^= uint64_t(uint8_t(c));
    h *= 1099511628211ULL;
  }
  return mix64(run_seed ^ mix64(h));
}

DistributionSpec base_distribution(Family family) {
  switch (family) {
    case Family::normal: return DistributionSpec::normal(0.0, 1.0);
    case Family::exponential: return DistributionSpec::exponential(1.0);
    case Family::double_exponential: return DistributionSpec::double_exponential(0.0, 1.0);
    default:
      throw std::invalid_argument("sweep: empirical jobs support normal, exp and laplace bases");
  }
}

ShiehFamily to_shieh_family(Family family) {
  switch (family) {
    case Family::normal: return ShiehFamily::normal;
    case Family::exponential: return ShiehFamily::shifted_exponential;
    case Family::shifted_exponential: return ShiehFamily::shifted_exponential;
    case Family::double_exponential: return ShiehFamily::double_exponential;
    default:
      throw std::invalid_argument("sweep: no location-shift form for family " +
                                  family_name(family));
  }
}

std::string shieh_family_label(ShiehFamily f) {
  switch (f) {
    case ShiehFamily::normal: return "normal";
    case ShiehFamily::shifted_exponential: return "shifted_exp";
    case ShiehFamily::double_exponential: return "laplace";
  }
  return "?";
}

}  // namespace

std::vector<SweepJob> table1_jobs() {
  std::vector<SweepJob> jobs;
  push_block(jobs, 6, 6, /*full=*/true);
  push_block(jobs, 15, 15, /*full=*/true);
  push_block(jobs, 6, 12, /*full=*/false);
  push_block(jobs, 12, 6, /*full=*/false);
  return jobs;
}

std::vector<SweepJob> fig2_jobs() {
  std::vector<SweepJob> jobs;
  for (int size : {6, 15}) {
    for (double k : {1.0, 2.0, 3.0, 4.0}) {
      for (double p = 0.50; p < 0.951; p += 0.05) {
        jobs.push_back({size, size, 0.05, std::round(p * 100.0) / 100.0, k,
                        MethodKind::empirical, Family::normal});
      }
    }
  }
  return jobs;
}

std::vector<SweepJob> fig1a_jobs() {
  std::vector<SweepJob> jobs;
  for (int size = 6; size <= 15; ++size) {
    for (double p : {0.80, 0.85, 0.90, 0.95}) {
      jobs.push_back({size, size, 0.05, p, 1.0, MethodKind::empirical, Family::normal});
    }
  }
  return jobs;
}

std::vector<SweepRow> run_sweep(const std::vector<SweepJob>& jobs, const SweepOptions& options) {
  std::vector<SweepRow> rows;
  rows.reserve(jobs.size());
  for (const SweepJob& job : jobs) {
    SweepRow row;
    row.m = job.m;
    row.n = job.n;
    row.alpha = job.alpha;
    row.p = job.p;
    row.k = job.k;
    row.method = method_name(job.method);
    row.seed = options.seed;
    try {
      switch (job.method) {
        case MethodKind::empirical: {
          row.family = family_name(job.family);
          const DistributionSpec f = base_distribution(job.family);
          StudyDesign design{job.m, job.n, job.alpha, TestMethod::automatic};
          const long long reps =
              options.reps > 0 ? options.reps : default_replicates(job.m, job.n);
          const PowerEstimate est = empirical_power_from_p(f, job.p, job.k, design, reps,
                                                           job_seed(job, options.seed),
                                                           options.threads);
          row.power = est.p_hat;
          row.ci_lo = est.wald_ci_99.lo;
          row.ci_hi = est.wald_ci_99.hi;
          row.s = est.s;
          break;
        }
        case MethodKind::shieh: {
          const ShiehFamily fam = to_shieh_family(job.family);
          row.family = shieh_family_label(fam);
          row.power = shieh_power(job.alpha, job.m, job.n, job.p, fam);
          row.ci_lo = row.ci_hi = row.power;
          row.s = 0;
          break;
        }
        case MethodKind::noether: {
          row.family = "none";
          row.power = noether_power(job.alpha, job.m, job.n, job.p, Sides::two_sided);
          row.ci_lo = row.ci_hi = row.power;
          row.s = 0;
          break;
        }
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
      row.power = row.ci_lo = row.ci_hi = std::nan("");
      if (row.family.empty()) row.family = family_name(job.family);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "m,n,alpha,p,k,family,method,power,ci_lo,ci_hi,s,seed\n";
  for (const SweepRow& r : rows) {
    out << r.m << ',' << r.n << ',' << format_double(r.alpha) << ',' << format_double(r.p) << ','
        << format_double(r.k) << ',' << r.family << ',' << r.method << ','
        << format_double(r.power) << ',' << format_double(r.ci_lo) << ','
        << format_double(r.ci_hi) << ',' << r.s << ',' << r.seed << '\n';
  }
  return out.str();
}

std::string to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    nlohmann::json obj;
    obj["m"] = r.m;
    obj["n"] = r.n;
    obj["alpha"] = r.alpha;
    obj["p"] = r.p;
    obj["k"] = r.k;
    obj["family"] = r.family;
    obj["method"] = r.method;
    if (std::isnan(r.power)) {
      obj["power"] = nullptr;
      obj["ci_lo"] = nullptr;
      obj["ci_hi"] = nullptr;
      obj["error"] = r.error;
    } else {
      obj["power"] = r.power;
      obj["ci_lo"] = r.ci_lo;
      obj["ci_hi"] = r.ci_hi;
    }
    obj["s"] = r.s;
    obj["seed"] = r.seed;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<SweepRow> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 12) throw std::invalid_argument("csv row with wrong column count");
    SweepRow r;
    r.m = std::stoi(fields[0]);
    r.n = std::stoi(fields[1]);
    r.alpha = std::stod(fields[2]);
    r.p = std::stod(fields[3]);
    r.k = std::stod(fields[4]);
    r.family = fields[5];
    r.method = fields[6];
    r.power = std::stod(fields[7]);
    r.ci_lo = std::stod(fields[8]);
    r.ci_hi = std::stod(fields[9]);
    r.s = std::stoll(fields[10]);
    r.seed = std::stoull(fields[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SweepRow> parse_json(const std::string& text) {
  const nlohmann::json arr = nlohmann::json::parse(text);
  std::vector<SweepRow> rows;
  for (const auto& obj : arr) {
    SweepRow r;
    r.m = obj.at("m").get<int>();
    r.n = obj.at("n").get<int>();
    r.alpha = obj.at("alpha").get<double>();
    r.p = obj.at("p").get<double>();
    r.k = obj.at("k").get<double>();
    r.family = obj.at("family").get<std::string>();
    r.method = obj.at("method").get<std::string>();
    if (obj.at("power").is_null()) {
      r.failed = true;
      r.power = r.ci_lo = r.ci_hi = std::nan("");
    } else {
      r.power = obj.at("power").get<double>();
      r.ci_lo = obj.at("ci_lo").get<double>();
      r.ci_hi = obj.at("ci_hi").get<double>();
    }
    r.s = obj.at("s").get<long long>();
    r.seed = obj.at("seed").get<uint64_t>();
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace wmwpower
