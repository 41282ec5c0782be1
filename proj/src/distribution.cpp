#include "wmwpower/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wmwpower/errors.hpp"
#include "wmwpower/math.hpp"

namespace wmwpower {

std::string family_name(Family f) {
  switch (f) {
    case Family::normal: return "normal";
    case Family::exponential: return "exp";
    case Family::shifted_exponential: return "shifted_exp";
    case Family::double_exponential: return "laplace";
    case Family::beta: return "beta";
    case Family::weibull: return "weibull";
    case Family::uniform: return "uniform";
    case Family::empirical: return "empirical";
  }
  return "?";
}

DistributionSpec DistributionSpec::normal(double mu, double sd) {
  DistributionSpec s{Family::normal, mu, sd, {}};
  s.validate();
  return s;
}
DistributionSpec DistributionSpec::exponential(double rate) {
  DistributionSpec s{Family::exponential, rate, 0.0, {}};
  s.validate();
  return s;
}
DistributionSpec DistributionSpec::shifted_exponential(double rate, double shift) {
  DistributionSpec s{Family::shifted_exponential, rate, shift, {}};
  s.validate();
  return s;
}
DistributionSpec DistributionSpec::double_exponential(double mu, double scale) {
  DistributionSpec s{Family::double_exponential, mu, scale, {}};
  s.validate();
  return s;
}
DistributionSpec DistributionSpec::beta(double a, double b) {
  DistributionSpec s{Family::beta, a, b, {}};
  s.validate();
  return s;
}
DistributionSpec DistributionSpec::weibull(double shape, double scale) {
  DistributionSpec s{Family::weibull, shape, scale, {}};
  s.validate();
  return s;
}
DistributionSpec DistributionSpec::uniform(double lo, double hi) {
  DistributionSpec s{Family::uniform, lo, hi, {}};
  s.validate();
  return s;
}
DistributionSpec DistributionSpec::empirical(std::vector<double> observations) {
  std::sort(observations.begin(), observations.end());
  DistributionSpec s{Family::empirical, 0.0, 0.0, std::move(observations)};
  s.validate();
  return s;
}

void DistributionSpec::validate() const {
  auto fail = [&](const char* msg) {
    throw std::invalid_argument(family_name(family) + ": " + msg);
  };
  auto finite = [](double v) { return std::isfinite(v); };
  switch (family) {
    case Family::normal:
      if (!finite(a) || !finite(b) || b <= 0.0) fail("sd must be > 0");
      break;
    case Family::exponential:
      if (!finite(a) || a <= 0.0) fail("rate must be > 0");
      break;
    case Family::shifted_exponential:
      if (!finite(a) || a <= 0.0) fail("rate must be > 0");
      if (!finite(b) || b < 0.0) fail("shift must be >= 0");
      break;
    case Family::double_exponential:
      if (!finite(a) || !finite(b) || b <= 0.0) fail("scale must be > 0");
      break;
    case Family::beta:
      if (!finite(a) || !finite(b) || a <= 0.0 || b <= 0.0) fail("shape parameters must be > 0");
      break;
    case Family::weibull:
      if (!finite(a) || a <= 0.0) fail("shape must be > 0");
      if (!finite(b) || b <= 0.0) fail("scale must be > 0");
      break;
    case Family::uniform:
      if (!finite(a) || !finite(b) || !(a < b)) fail("requires lo < hi");
      break;
    case Family::empirical:
      if (data.size() < 2) fail("requires at least 2 observations");
      for (double v : data)
        if (!finite(v)) fail("observations must be finite");
      if (!std::is_sorted(data.begin(), data.end())) fail("observations must be sorted");
      break;
  }
}

std::string DistributionSpec::describe() const {
  char buf[128];
  switch (family) {
    case Family::normal:
      std::snprintf(buf, sizeof buf, "normal(mu=%g, sd=%g)", a, b);
      break;
    case Family::exponential:
      std::snprintf(buf, sizeof buf, "exp(rate=%g)", a);
      break;
    case Family::shifted_exponential:
      std::snprintf(buf, sizeof buf, "shifted_exp(rate=%g, shift=%g)", a, b);
      break;
    case Family::double_exponential:
      std::snprintf(buf, sizeof buf, "laplace(mu=%g, scale=%g)", a, b);
      break;
    case Family::beta:
      std::snprintf(buf, sizeof buf, "beta(a=%g, b=%g)", a, b);
      break;
    case Family::weibull:
      std::snprintf(buf, sizeof buf, "weibull(shape=%g, scale=%g)", a, b);
      break;
    case Family::uniform:
      std::snprintf(buf, sizeof buf, "uniform(lo=%g, hi=%g)", a, b);
      break;
    case Family::empirical:
      std::snprintf(buf, sizeof buf, "empirical(n=%zu)", data.size());
      break;
  }
  return buf;
}

namespace {

// Regularized incomplete beta I_x(a,b) via the Lentz continued fraction.
double incbeta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 3e-15) return h;
  }
  throw numerical_error("incomplete beta: continued fraction did not converge");
}

double incbeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double lfront =
      a * std::log(x) + b * std::log1p(-x) - (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  const double front = std::exp(lfront);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * incbeta_cf(a, b, x) / a;
  }
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b))) *
                   incbeta_cf(b, a, 1.0 - x) / b;
}

double beta_quantile(double a, double b, double q) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (incbeta(a, b, mid) < q) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double gamma_draw(double shape, RandomStream& stream);

// Marsaglia-Tsang squeeze for shape >= 1; boosted for shape < 1.
double gamma_draw_ge1(double shape, RandomStream& stream) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal_quantile(stream.uniform01());
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = stream.uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double gamma_draw(double shape, RandomStream& stream) {
  if (shape >= 1.0) return gamma_draw_ge1(shape, stream);
  const double g = gamma_draw_ge1(shape + 1.0, stream);
  return g * std::pow(stream.uniform01(), 1.0 / shape);
}

}  // namespace

double cdf_value(const DistributionSpec& spec, double x) {
  spec.validate();
  switch (spec.family) {
    case Family::normal:
      return normal_cdf((x - spec.a) / spec.b);
    case Family::exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-spec.a * x);
    case Family::shifted_exponential:
      return x <= spec.b ? 0.0 : -std::expm1(-spec.a * (x - spec.b));
    case Family::double_exponential: {
      const double z = (x - spec.a) / spec.b;
      return z <= 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    case Family::beta:
      return incbeta(spec.a, spec.b, x);
    case Family::weibull:
      return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x / spec.b, spec.a));
    case Family::uniform:
      if (x <= spec.a) return 0.0;
      if (x >= spec.b) return 1.0;
      return (x - spec.a) / (spec.b - spec.a);
    case Family::empirical: {
      const auto it = std::upper_bound(spec.data.begin(), spec.data.end(), x);
      return double(it - spec.data.begin()) / double(spec.data.size());
    }
  }
  return 0.0;
}

double pdf_value(const DistributionSpec& spec, double x) {
  spec.validate();
  switch (spec.family) {
    case Family::normal:
      return normal_pdf((x - spec.a) / spec.b) / spec.b;
    case Family::exponential:
      return x < 0.0 ? 0.0 : spec.a * std::exp(-spec.a * x);
    case Family::shifted_exponential:
      return x < spec.b ? 0.0 : spec.a * std::exp(-spec.a * (x - spec.b));
    case Family::double_exponential:
      return std::exp(-std::fabs(x - spec.a) / spec.b) / (2.0 * spec.b);
    case Family::beta: {
      if (x <= 0.0 || x >= 1.0) return 0.0;
      const double lp = (spec.a - 1.0) * std::log(x) + (spec.b - 1.0) * std::log1p(-x) -
                        (std::lgamma(spec.a) + std::lgamma(spec.b) - std::lgamma(spec.a + spec.b));
      return std::exp(lp);
    }
    case Family::weibull: {
      if (x < 0.0) return 0.0;
      if (x == 0.0) return spec.a < 1.0 ? 0.0 : (spec.a == 1.0 ? 1.0 / spec.b : 0.0);
      const double z = x / spec.b;
      return (spec.a / spec.b) * std::pow(z, spec.a - 1.0) * std::exp(-std::pow(z, spec.a));
    }
    case Family::uniform:
      return (x < spec.a || x > spec.b) ? 0.0 : 1.0 / (spec.b - spec.a);
    case Family::empirical:
      throw std::invalid_argument("pdf of an empirical distribution is not defined");
  }
  return 0.0;
}

double quantile(const DistributionSpec& spec, double q) {
  spec.validate();
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("quantile: q must lie in (0,1)");
  }
  switch (spec.family) {
    case Family::normal:
      return spec.a + spec.b * normal_quantile(q);
    case Family::exponential:
      return -std::log1p(-q) / spec.a;
    case Family::shifted_exponential:
      return spec.b - std::log1p(-q) / spec.a;
    case Family::double_exponential:
      return q < 0.5 ? spec.a + spec.b * std::log(2.0 * q)
                     : spec.a - spec.b * std::log(2.0 * (1.0 - q));
    case Family::beta:
      return beta_quantile(spec.a, spec.b, q);
    case Family::weibull:
      return spec.b * std::pow(-std::log1p(-q), 1.0 / spec.a);
    case Family::uniform:
      return spec.a + q * (spec.b - spec.a);
    case Family::empirical: {
      const size_t n = spec.data.size();
      const size_t idx = std::min(n - 1, size_t(std::ceil(q * double(n))) - 1);
      return spec.data[idx];
    }
  }
  return 0.0;
}

double sample_one(const DistributionSpec& spec, RandomStream& stream) {
  switch (spec.family) {
    case Family::beta: {
      const double g1 = gamma_draw(spec.a, stream);
      const double g2 = gamma_draw(spec.b, stream);
      return g1 / (g1 + g2);
    }
    case Family::empirical: {
      const size_t n = spec.data.size();
      const size_t idx = std::min(n - 1, size_t(stream.uniform01() * double(n)));
      return spec.data[idx];
    }
    default:
      return quantile(spec, stream.uniform01());
  }
}

void sample_into(const DistributionSpec& spec, double* out, size_t count, RandomStream& stream) {
  for (size_t i = 0; i < count; ++i) out[i] = sample_one(spec, stream);
}

std::vector<double> sample(const DistributionSpec& spec, size_t count, RandomStream& stream) {
  if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
  spec.validate();
  std::vector<double> out(count);
  sample_into(spec, out.data(), count, stream);
  return out;
}

namespace {

// Interior points where the density (hence the integrand) can kink.
void special_points(const DistributionSpec& s, std::vector<double>& pts) {
  switch (s.family) {
    case Family::normal:
      pts.push_back(s.a);
      break;
    case Family::exponential:
      pts.push_back(0.0);
      pts.push_back(quantile(s, 0.5));
      break;
    case Family::shifted_exponential:
      pts.push_back(s.b);
      pts.push_back(quantile(s, 0.5));
      break;
    case Family::double_exponential:
      pts.push_back(s.a);
      break;
    case Family::beta:
      pts.push_back(0.0);
      pts.push_back(1.0);
      pts.push_back(quantile(s, 0.5));
      break;
    case Family::weibull:
      pts.push_back(0.0);
      pts.push_back(quantile(s, 0.5));
      break;
    case Family::uniform:
      pts.push_back(s.a);
      pts.push_back(s.b);
      break;
    case Family::empirical:
      break;
  }
}

}  // namespace

double effect_size_p_numeric(const DistributionSpec& f, const DistributionSpec& g) {
  const double eps = 1e-14;
  const double lo = quantile(g, eps);
  const double hi = quantile(g, 1.0 - eps);
  std::vector<double> pts{lo, hi};
  special_points(f, pts);
  special_points(g, pts);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto integrand = [&](double y) { return pdf_value(g, y) * cdf_value(f, y); };
  double total = 0.0;
  double prev = lo;
  for (double pt : pts) {
    if (pt <= lo || pt > hi) continue;
    if (pt - prev > 0.0) total += integrate(integrand, prev, pt, 1e-11);
    prev = pt;
  }
  if (hi - prev > 0.0) total += integrate(integrand, prev, hi, 1e-11);

  // tail mass outside [lo, hi]; each side is bounded by eps
  total += cdf_value(g, lo) * cdf_value(f, lo);
  total += (1.0 - cdf_value(g, hi)) * 0.5 * (cdf_value(f, hi) + 1.0);
  return std::clamp(total, 0.0, 1.0);
}

double effect_size_p(const DistributionSpec& f, const DistributionSpec& g) {
  f.validate();
  g.validate();
  if (f.family == Family::empirical && g.family == Family::empirical) {
    // half-tie convention keeps p(f,g) + p(g,f) = 1 exact
    double acc = 0.0;
    for (double x : f.data) {
      const auto lt = std::lower_bound(g.data.begin(), g.data.end(), x);
      const auto gt = std::upper_bound(g.data.begin(), g.data.end(), x);
      acc += double(g.data.end() - gt) + 0.5 * double(gt - lt);
    }
    return acc / (double(f.data.size()) * double(g.data.size()));
  }
  if (f.family == Family::empirical) {
    double acc = 0.0;
    for (double x : f.data) acc += 1.0 - cdf_value(g, x);
    return acc / double(f.data.size());
  }
  if (g.family == Family::empirical) {
    double acc = 0.0;
    for (double y : g.data) acc += cdf_value(f, y);
    return acc / double(g.data.size());
  }
  if (f.family == Family::exponential && g.family == Family::exponential) {
    return f.a / (f.a + g.a);
  }
  if (f.family == Family::normal && g.family == Family::normal) {
    return normal_cdf((g.a - f.a) / std::sqrt(f.b * f.b + g.b * g.b));
  }
  return effect_size_p_numeric(f, g);
}

EffectSizeSolution solve_alternative(const DistributionSpec& f, double p, double k) {
  f.validate();
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("solve_alternative: p must lie in (0,1)");
  }
  EffectSizeSolution sol;
  sol.k = k;
  switch (f.family) {
    case Family::exponential: {
      sol.g = DistributionSpec::exponential(f.a * (1.0 - p) / p);
      sol.k = 1.0;
      break;
    }
    case Family::normal: {
      if (!(k > 0.0)) throw std::invalid_argument("solve_alternative: k must be > 0");
      const double sd_g = k * f.b;
      const double mu_g = f.a + normal_quantile(p) * std::sqrt(f.b * f.b + sd_g * sd_g);
      sol.g = DistributionSpec::normal(mu_g, sd_g);
      break;
    }
    case Family::double_exponential: {
      if (!(k > 0.0)) throw std::invalid_argument("solve_alternative: k must be > 0");
      const double scale_g = k * f.b;
      auto p_of_mu = [&](double mu) {
        return effect_size_p_numeric(f, DistributionSpec::double_exponential(mu, scale_g)) - p;
      };
      double lo = f.a - 20.0 * scale_g;
      double hi = f.a + 20.0 * scale_g;
      int expansions = 0;
      while (p_of_mu(lo) > 0.0 || p_of_mu(hi) < 0.0) {
        const double width = hi - lo;
        lo -= width;
        hi += width;
        if (++expansions > 16) {
          throw numerical_error("solve_alternative: no bracket for the Laplace location");
        }
      }
      const double mu_g = brent_root([&](double mu) { return p_of_mu(mu); }, lo, hi, 1e-13);
      sol.g = DistributionSpec::double_exponential(mu_g, scale_g);
      break;
    }
    default:
      throw std::invalid_argument(
          "solve_alternative: supported families are exponential, normal, laplace");
  }
  sol.achieved_p = effect_size_p(f, sol.g);
  if (std::fabs(sol.achieved_p - p) > 1e-10) {
    throw numerical_error("solve_alternative: achieved effect size misses the target");
  }
  return sol;
}

DistributionSpec parse_empirical_stream(std::istream& in, const std::string& origin) {
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    size_t end = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(begin, end - begin + 1);
    try {
      size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
      values.push_back(v);
    } catch (const std::exception&) {
      std::ostringstream msg;
      msg << origin << ":" << line_no << ": cannot parse '" << token << "' as a real number";
      throw std::invalid_argument(msg.str());
    }
  }
  if (values.size() < 2) {
    throw std::invalid_argument(origin + ": empirical data needs at least 2 observations, got " +
                                std::to_string(values.size()));
  }
  return DistributionSpec::empirical(std::move(values));
}

DistributionSpec load_empirical_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open data file: " + path);
  return parse_empirical_stream(in, path);
}

}  // namespace wmwpower
