#include "rwm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rwm/analytic_kernels.hpp"
#include "rwm/chaos_coefficients.hpp"
#include "rwm/nodal_geometry.hpp"
#include "rwm/radial_quadrature.hpp"
#include "rwm/sphere_moments.hpp"
#include "rwm/variance_ledger.hpp"
#include "rwm/wavefield.hpp"

#include "json.hpp"

namespace rwm {

void ExperimentConfig::validate() const {
  if (kind != "verify" && kind != "simulate" && kind != "chaos" && kind != "scaling") {
    throw std::invalid_argument("config: unknown kind '" + kind + "'");
  }
  if (dim != 2 && dim != 3) throw std::invalid_argument("config: dim must be 2 or 3");
  if (n_waves < 1) throw std::invalid_argument("config: n_waves must be >= 1");
  if (grid_spacing <= 0 || grid_spacing > M_PI / 3.0 + 1e-12) {
    throw std::invalid_argument("config: grid_spacing must be in (0, pi/3]");
  }
  if (tolerance <= 0) throw std::invalid_argument("config: tolerance must be positive");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] <= 0) throw std::invalid_argument("config: radii must be positive");
    if (i && radii[i] <= radii[i - 1]) {
      throw std::invalid_argument("config: radii must be strictly ascending");
    }
  }
  if (kind != "verify") {
    if (radii.empty()) throw std::invalid_argument("config: radii required for kind " + kind);
    if (replicates < 2) {
      throw std::invalid_argument("config: replicates must be >= 2 for variance outputs");
    }
  }
}

namespace {

ResultRow row(const std::string& id, const std::string& kind, int dim, double R,
              const std::string& stat, double value) {
  ResultRow r;
  r.experiment_id = id;
  r.kind = kind;
  r.dim = dim;
  r.R = R;
  r.statistic = stat;
  r.value = value;
  r.flag = "n/a";
  return r;
}

void set_reference(ResultRow& r, double paper, bool ok, bool open_question = false) {
  r.paper_value = paper;
  r.has_paper_value = true;
  r.flag = ok ? "ok" : "mismatch";
  r.open_question = !ok && open_question;
}

double ball_volume(int dim, double R) {
  return dim == 3 ? 4.0 * M_PI * R * R * R / 3.0 : 4.0 * R * R;  // square in 2D
}

}  // namespace

std::vector<ResultRow> run_verification_suite(double tolerance) {
  std::vector<ResultRow> rows;
  const std::string id = "verify";
  using K = RadialKernel;

  struct RadialCase {
    const char* name;
    RadialKernelSpec spec;
    double paper;
  };
  const RadialCase radial_cases[] = {
      {"radial dsinc^4", {{{K::dsinc, 4}}, 2}, 7.0 * M_PI / 60.0},
      {"radial A^4", {{{K::kernel_a, 4}}, 2}, 11.0 * M_PI / 140.0},
      {"radial A^3 B", {{{K::kernel_a, 3}, {K::kernel_b, 1}}, 2}, M_PI / 70.0},
      {"radial A^2 B^2", {{{K::kernel_a, 2}, {K::kernel_b, 2}}, 2}, 2.0 * M_PI / 315.0},
      {"radial A B^3", {{{K::kernel_a, 1}, {K::kernel_b, 3}}, 2}, 17.0 * M_PI / 3780.0},
      {"radial B^4", {{{K::kernel_b, 4}}, 2}, 17.0 * M_PI / 2835.0},
      {"radial sinc^2 dsinc^2", {{{K::sinc, 2}, {K::dsinc, 2}}, 2}, M_PI / 12.0},
      {"radial dsinc^2 A^2", {{{K::dsinc, 2}, {K::kernel_a, 2}}, 2}, 23.0 * M_PI / 420.0},
      {"radial dsinc^2 A B", {{{K::dsinc, 2}, {K::kernel_a, 1}, {K::kernel_b, 1}}, 2}, M_PI / 42.0},
      {"radial dsinc^2 B^2", {{{K::dsinc, 2}, {K::kernel_b, 2}}, 2}, 2.0 * M_PI / 105.0},
      {"radial sinc^4", {{{K::sinc, 4}}, 2}, M_PI / 4.0},
      {"radial sinc^6", {{{K::sinc, 6}}, 2}, M_PI / 8.0},
  };
  for (const auto& c : radial_cases) {
    ResultRow r = row(id, "verify", 3, 0.0, c.name, 0.0);
    try {
      const IntegralResult res = radial_integral(c.spec, tolerance);
      r.value = res.value;
      r.stderr_ = res.abs_error_estimate;
      set_reference(r, c.paper, std::abs(res.value - c.paper) <= std::max(1e-8, 10 * tolerance));
    } catch (const ConvergenceError& e) {
      r.value = e.best.value;
      r.stderr_ = e.best.abs_error_estimate;
      set_reference(r, c.paper, false);
    }
    rows.push_back(r);
  }

  // Leading constant of the double-ball integral of r^4, in units of
  // vol(B_R) * pi^2: the published counterpart carries an extra factor 2
  // that contradicts the radial table above (documented discrepancy).
  {
    ResultRow r = row(id, "verify", 3, 0.0, "overlap r^4 leading constant", 0.0);
    r.value = leading_order_constant({{{K::sinc, 4}}, 2});
    set_reference(r, 2.0 * M_PI * M_PI, std::abs(r.value - 2.0 * M_PI * M_PI) <= 1e-8, true);
    rows.push_back(r);
  }

  using S = AngularPattern::Summation;
  struct AngularCase {
    const char* name;
    AngularPattern pattern;
    Rational paper_over_pi;  // constant divided by pi
  };
  const AngularCase angular_cases[] = {
      {"angular sum D^4", {S::sum_over_k, {4}}, {12, 5}},
      {"angular sum D^8", {S::sum_over_k, {8}}, {12, 9}},
      {"angular pairs D^4 D^4", {S::sum_over_distinct_pairs, {4, 4}}, {24, 105}},
      {"angular sum D^6", {S::sum_over_k, {6}}, {12, 7}},
      {"angular pairs D^6 D^2", {S::sum_over_distinct_pairs, {6, 2}}, {8, 21}},
      {"angular pairs D^4 D^2", {S::sum_over_distinct_pairs, {4, 2}}, {24, 35}},
      {"angular pairs D^2 D^2", {S::sum_over_distinct_pairs, {2, 2}}, {8, 5}},
      {"angular triples D^4 D^2 D^2", {S::sum_over_distinct_triples, {4, 2, 2}}, {24, 315}},
      {"angular triples D^2 D^2 D^2", {S::sum_over_distinct_triples, {2, 2, 2}}, {8, 35}},
      {"angular sum D^2", {S::sum_over_k, {2}}, {4, 1}},
  };
  for (const auto& c : angular_cases) {
    const PiRational exact = angular_pattern_sum(c.pattern);
    ResultRow r = row(id, "verify", 3, 0.0, c.name, exact.value());
    // Quadrature cross-check on the representative monomial.
    int half[3] = {0, 0, 0};
    for (std::size_t s = 0; s < c.pattern.exponents.size(); ++s) half[s] = c.pattern.exponents[s] / 2;
    const double quad = sphere_quadrature_moment(half[0], half[1], half[2], 64);
    const double exact_monomial = sphere_monomial_moment(half[0], half[1], half[2]).value();
    const bool quad_ok = std::abs(quad - exact_monomial) <= 1e-9;
    set_reference(r, PiRational{c.paper_over_pi}.value(), exact == PiRational{c.paper_over_pi} && quad_ok);
    rows.push_back(r);
  }

  // Half-moment ratio identities.
  {
    ResultRow r = row(id, "verify", 3, 0.0, "moment ratio m5/m3", gaussian_half_moment(5) / gaussian_half_moment(3));
    set_reference(r, 4.0, r.value == 4.0);
    rows.push_back(r);
    ResultRow r2 = row(id, "verify", 3, 0.0, "moment ratio m7/m3", gaussian_half_moment(7) / gaussian_half_moment(3));
    set_reference(r2, 24.0, r2.value == 24.0);
    rows.push_back(r2);
  }

  // Closed-form coefficient constants vs sampling.  The published
  // constants for a_0, a_{2ei+2ej} and a_{4ek} disagree with the sampled
  // expectation of the defining integrand; these mismatches are expected
  // and documented (the closed forms reproduce the published constants).
  {
    struct CoeffCase {
      const char* name;
      std::vector<int> alpha;
      bool expect_match;
    };
    const CoeffCase cases[] = {
        {"a_0 sampled vs published", {0, 0, 0, 0, 0, 0}, false},
        {"a_{2e1} sampled vs published", {2, 0, 0, 0, 0, 0}, true},
        {"a_{2e1+2e2} sampled vs published", {2, 2, 0, 0, 0, 0}, false},
        {"a_{4e1} sampled vs published", {4, 0, 0, 0, 0, 0}, false},
    };
    for (const auto& c : cases) {
      const HermiteIndex alpha{c.alpha};
      const double closed = a_coefficient(alpha);
      const CoefficientEstimate mc = mc_a_coefficient(alpha, 2000000, 20260823);
      ResultRow r = row(id, "verify", 3, 0.0, c.name, mc.value);
      r.stderr_ = mc.stderr_;
      const bool ok = std::abs(mc.value - closed) <= 4.0 * mc.stderr_;
      set_reference(r, closed, ok, /*open_question=*/!c.expect_match);
      rows.push_back(r);
    }
  }

  // Variance ledger: per-block values, subtotals and the assembled bound.
  {
    const LedgerReport rep = assemble_lower_bound(std::min(tolerance, 1e-8));
    auto push_entry = [&](const LedgerEntry& e, const char* prefix) {
      ResultRow r = row(id, "verify", 3, 0.0, std::string(prefix) + e.label, e.value);
      if (e.has_reference) {
        set_reference(r, e.paper_value, e.flag == "ok", e.open_question);
      }
      rows.push_back(r);
    };
    for (const auto& e : rep.terms) push_entry(e, "ledger ");
    for (const auto& e : rep.subtotals) push_entry(e, "ledger subtotal ");
    ResultRow r = row(id, "verify", 3, 0.0, "ledger assembled bound / vol", rep.var_i4_per_volume);
    set_reference(r, rep.reference_bound, std::abs(r.value - rep.reference_bound) < 1e-6, true);
    rows.push_back(r);
    ResultRow rp = row(id, "verify", 3, 0.0, "ledger bound positive", rep.positive ? 1.0 : 0.0);
    set_reference(rp, 1.0, rep.positive);
    rows.push_back(rp);
  }

  return rows;
}

std::vector<ResultRow> run_simulation(const ExperimentConfig& config) {
  config.validate();
  if (config.kind != "simulate") throw std::invalid_argument("run_simulation: kind must be simulate");
  const std::string id = "simulate-dim" + std::to_string(config.dim);
  std::vector<ResultRow> rows;
  for (double R : config.radii) {
    const NodalStatistics st = mc_nodal_statistics(config, R);
    const double vol = ball_volume(config.dim, R);
    ResultRow rm = row(id, "simulate", config.dim, R, "mean_length_density", st.mean_length / vol);
    rm.stderr_ = st.stderr_mean / vol;
    const double target = config.dim == 3 ? expected_length_density() : 1.0 / (2.0 * std::sqrt(2.0));
    set_reference(rm, target, std::abs(rm.value - target) <= 0.03 * target + 3.0 * rm.stderr_);
    rows.push_back(rm);
    ResultRow rv = row(id, "simulate", config.dim, R, "variance_length_density", st.variance / vol);
    rv.stderr_ = st.stderr_variance / vol;
    rows.push_back(rv);
  }
  return rows;
}

ScalingResult run_scaling_study(const ExperimentConfig& config) {
  config.validate();
  if (config.kind != "scaling") throw std::invalid_argument("run_scaling_study: kind must be scaling");
  if (config.radii.size() < 3) throw std::invalid_argument("run_scaling_study: need at least 3 radii");
  const std::string id = "scaling-dim" + std::to_string(config.dim);
  ScalingResult out;
  std::vector<double> xs, ys;
  for (double R : config.radii) {
    const NodalStatistics st = mc_nodal_statistics(config, R);
    const double ratio = st.variance / (st.mean_length * st.mean_length);
    xs.push_back(std::log(R));
    ys.push_back(std::log(ratio));
    ResultRow r = row(id, "scaling", config.dim, R, "log_var_over_mean_sq", std::log(ratio));
    r.stderr_ = st.stderr_variance / st.variance;  // delta method on the log
    out.rows.push_back(r);
  }
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.slope = sxy / sxx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double resid = ys[i] - my - out.slope * (xs[i] - mx);
    sse += resid * resid;
  }
  out.slope_stderr = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  ResultRow rs = row(id, "scaling", config.dim, 0.0, "concentration_slope", out.slope);
  rs.stderr_ = out.slope_stderr;
  const double lo = config.dim == 3 ? -3.6 : -2.6;
  const double hi = config.dim == 3 ? -2.4 : -1.4;
  set_reference(rs, config.dim == 3 ? -3.0 : -2.0, out.slope >= lo && out.slope <= hi);
  out.rows.push_back(rs);
  return out;
}

std::vector<ResultRow> run_chaos_study(const ExperimentConfig& config) {
  config.validate();
  if (config.kind != "chaos") throw std::invalid_argument("run_chaos_study: kind must be chaos");
  if (config.dim != 3) throw std::invalid_argument("run_chaos_study: 3D only");
  const std::string id = "chaos-dim3";
  std::vector<ResultRow> rows;
  for (double R : config.radii) {
    const int n = config.replicates;
    std::vector<double> i2(n), i4(n);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < n; ++r) {
      auto [xi, eta] = sample_ensemble(3, config.n_waves, config.seed, (std::uint64_t)r);
      const FieldGrid grid = evaluate_grid(xi, eta, make_ball_grid(3, R, config.grid_spacing));
      i2[r] = chaos_projection(grid, 1, R);
      i4[r] = chaos_projection(grid, 2, R);
    }
    const double vol = ball_volume(3, R);
    auto moments = [&](const std::vector<double>& v, double& mean, double& var, double& se_var) {
      mean = 0;
      for (double x : v) mean += x;
      mean /= n;
      double m2 = 0, m4 = 0;
      for (double x : v) {
        const double d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
      }
      var = m2 / (n - 1);
      se_var = std::sqrt(std::max(0.0, m4 / n - var * var) / n);
    };
    double mean2, var2, se2, mean4, var4, se4;
    moments(i2, mean2, var2, se2);
    moments(i4, mean4, var4, se4);
    ResultRow r2 = row(id, "chaos", 3, R, "var_I2_density", var2 / vol);
    r2.stderr_ = se2 / vol;
    rows.push_back(r2);
    ResultRow rm = row(id, "chaos", 3, R, "mean_I4", mean4);
    rm.stderr_ = std::sqrt(var4 / n);
    set_reference(rm, 0.0, std::abs(mean4) <= 3.0 * rm.stderr_);
    rows.push_back(rm);
    ResultRow r4 = row(id, "chaos", 3, R, "var_I4_density", var4 / vol);
    r4.stderr_ = se4 / vol;
    rows.push_back(r4);
  }
  const LedgerReport rep = assemble_lower_bound(1e-8);
  rows.push_back(row(id, "chaos", 3, 0.0, "ledger_var_I4_density_bound", rep.var_i4_per_volume));
  return rows;
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  const std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  std::fprintf(f, "# generated %s\n", stamp);
  std::fprintf(f, "experiment_id,kind,dim,R,statistic,value,stderr,paper_value,flag\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%s,%s,%d,%.12g,%s,%.12g,%.12g,", r.experiment_id.c_str(), r.kind.c_str(),
                 r.dim, r.R, r.statistic.c_str(), r.value, r.stderr_);
    if (r.has_paper_value) {
      std::fprintf(f, "%.12g", r.paper_value);
    }
    std::fprintf(f, ",%s\n", r.flag.c_str());
  }
  std::fclose(f);
}

ExperimentConfig config_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig c;
  if (j.contains("kind")) c.kind = j["kind"].get<std::string>();
  if (j.contains("dim")) c.dim = j["dim"].get<int>();
  if (j.contains("radii")) c.radii = j["radii"].get<std::vector<double>>();
  if (j.contains("n_waves")) c.n_waves = j["n_waves"].get<int>();
  if (j.contains("grid_spacing")) c.grid_spacing = j["grid_spacing"].get<double>();
  if (j.contains("replicates")) c.replicates = j["replicates"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("tolerance")) c.tolerance = j["tolerance"].get<double>();
  if (j.contains("output")) c.output = j["output"].get<std::string>();
  return c;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

int apply_thread_count(int requested) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("RWM_THREADS")) n = std::atoi(env);
  }
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool has_regressions(const std::vector<ResultRow>& rows) {
  for (const auto& r : rows) {
    if (r.flag == "mismatch" && !r.open_question) return true;
  }
  return false;
}

}  // namespace rwm
