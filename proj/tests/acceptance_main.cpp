// Acceptance harness: one pass/fail line per criterion, nonzero exit if any
// criterion fails.  Known-unattainable targets are executed faithfully and
// reported red with the measured numbers.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "rwm/analytic_kernels.hpp"
#include "rwm/chaos_coefficients.hpp"
#include "rwm/experiments.hpp"
#include "rwm/gauss.hpp"
#include "rwm/nodal_geometry.hpp"
#include "rwm/radial_quadrature.hpp"
#include "rwm/rng.hpp"
#include "rwm/sphere_moments.hpp"
#include "rwm/variance_ledger.hpp"
#include "rwm/wavefield.hpp"

using namespace rwm;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct Criterion {
  Criterion(int n, std::string t) : number(n), title(std::move(t)) {}
  int number = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

// ---- shared Monte Carlo results (computed once, reused) ------------------

struct DensityRun {
  double R = 0.0;
  NodalStatistics stats;
  double volume = 0.0;
};

std::vector<DensityRun> run_densities(int dim, const std::vector<double>& radii,
                                      const std::vector<int>& replicates, std::uint64_t seed) {
  std::vector<DensityRun> out;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    ExperimentConfig cfg;
    cfg.kind = "simulate";
    cfg.dim = dim;
    cfg.radii = {radii[i]};
    cfg.n_waves = 256;
    cfg.grid_spacing = 2.0 * M_PI / 12.0;
    cfg.replicates = replicates[i];
    cfg.seed = seed;
    DensityRun run;
    run.R = radii[i];
    run.stats = mc_nodal_statistics(cfg, radii[i]);
    run.volume = dim == 3 ? 4.0 * M_PI * std::pow(radii[i], 3) / 3.0 : 4.0 * radii[i] * radii[i];
    out.push_back(run);
  }
  return out;
}

struct Fit {
  double slope = 0.0;
  double slope_stderr = 0.0;
};

// OLS slope of y on x with per-point measurement errors sigma propagated
// into the slope standard error.
Fit fit_line(const std::vector<double>& x, const std::vector<double>& y,
             const std::vector<double>& sigma) {
  const std::size_t n = x.size();
  double mx = 0;
  for (double v : x) mx += v;
  mx /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - 0.0);
  }
  Fit f;
  f.slope = sxy / sxx;
  double var = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = (x[i] - mx) / sxx;
    var += c * c * sigma[i] * sigma[i];
  }
  f.slope_stderr = std::sqrt(var);
  return f;
}

// ---- criteria ------------------------------------------------------------

Criterion radial_table() {
  Criterion c{1, "radial constant table to 1e-8 in under 10 s"};
  const double t0 = now_seconds();
  using K = RadialKernel;
  const struct {
    RadialKernelSpec spec;
    double target;
  } cases[] = {
      {{{{K::dsinc, 4}}, 2}, 7.0 * M_PI / 60.0},
      {{{{K::kernel_a, 4}}, 2}, 11.0 * M_PI / 140.0},
      {{{{K::kernel_a, 3}, {K::kernel_b, 1}}, 2}, M_PI / 70.0},
      {{{{K::kernel_a, 2}, {K::kernel_b, 2}}, 2}, 2.0 * M_PI / 315.0},
      {{{{K::kernel_a, 1}, {K::kernel_b, 3}}, 2}, 17.0 * M_PI / 3780.0},
      {{{{K::kernel_b, 4}}, 2}, 17.0 * M_PI / 2835.0},
      {{{{K::sinc, 2}, {K::dsinc, 2}}, 2}, M_PI / 12.0},
      {{{{K::dsinc, 2}, {K::kernel_a, 2}}, 2}, 23.0 * M_PI / 420.0},
      {{{{K::dsinc, 2}, {K::kernel_a, 1}, {K::kernel_b, 1}}, 2}, M_PI / 42.0},
      {{{{K::dsinc, 2}, {K::kernel_b, 2}}, 2}, 2.0 * M_PI / 105.0},
  };
  double worst = 0.0;
  for (const auto& t : cases) {
    worst = std::max(worst, std::abs(radial_integral(t.spec, 1e-10).value - t.target));
  }
  const double dt = now_seconds() - t0;
  c.pass = worst <= 1e-8 && dt < 10.0;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max abs error %.2e, %.2f s", worst, dt);
  c.detail = buf;
  return c;
}

Criterion angular_table() {
  Criterion c{2, "angular constant table exact and within 1e-9 of quadrature"};
  using S = AngularPattern::Summation;
  const struct {
    AngularPattern pattern;
    Rational over_pi;
  } cases[] = {
      {{S::sum_over_k, {4}}, {12, 5}},
      {{S::sum_over_k, {8}}, {12, 9}},
      {{S::sum_over_distinct_pairs, {4, 4}}, {24, 105}},
      {{S::sum_over_k, {6}}, {12, 7}},
      {{S::sum_over_distinct_pairs, {6, 2}}, {8, 21}},
      {{S::sum_over_distinct_pairs, {4, 2}}, {24, 35}},
      {{S::sum_over_distinct_pairs, {2, 2}}, {8, 5}},
      {{S::sum_over_distinct_triples, {4, 2, 2}}, {24, 315}},
      {{S::sum_over_distinct_triples, {2, 2, 2}}, {8, 35}},
      {{S::sum_over_k, {2}}, {4, 1}},
  };
  bool exact_ok = true;
  double worst_quad = 0.0;
  for (const auto& t : cases) {
    exact_ok = exact_ok && angular_pattern_sum(t.pattern) == PiRational{t.over_pi};
    int half[3] = {0, 0, 0};
    for (std::size_t s = 0; s < t.pattern.exponents.size(); ++s) {
      half[s] = t.pattern.exponents[s] / 2;
    }
    worst_quad = std::max(worst_quad,
                          std::abs(sphere_quadrature_moment(half[0], half[1], half[2], 64) -
                                   sphere_monomial_moment(half[0], half[1], half[2]).value()));
  }
  c.pass = exact_ok && worst_quad <= 1e-9;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "exact %s, quadrature gap %.2e", exact_ok ? "yes" : "NO",
                worst_quad);
  c.detail = buf;
  return c;
}

Criterion sampled_coefficients() {
  Criterion c{3, "sampled Hermite coefficients vs published 1, 1/3, 1/9, -5/9"};
  const double t0 = now_seconds();
  const struct {
    const char* name;
    std::vector<int> alpha;
    double published;
  } cases[] = {
      {"a_0", {0, 0, 0, 0, 0, 0}, 1.0},
      {"a_{2e1}", {2, 0, 0, 0, 0, 0}, 1.0 / 3.0},
      {"a_{2e1+2e2}", {2, 2, 0, 0, 0, 0}, 1.0 / 9.0},
      {"a_{4e1}", {4, 0, 0, 0, 0, 0}, -5.0 / 9.0},
  };
  c.pass = true;
  std::string detail;
  for (const auto& t : cases) {
    const CoefficientEstimate mc = mc_a_coefficient(HermiteIndex{t.alpha}, 10000000, 20260823);
    const double dev = std::abs(mc.value - t.published) / mc.stderr_;
    if (dev > 3.0) c.pass = false;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s%s=%.5f (%.0f se from %.4f)", detail.empty() ? "" : "; ",
                  t.name, mc.value, dev, t.published);
    detail += buf;
  }
  const double dt = now_seconds() - t0;
  if (dt >= 60.0) c.pass = false;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "; %.1f s", dt);
  c.detail = detail + buf;
  return c;
}

Criterion moment_identities() {
  Criterion c{4, "moment ratios exact; Hermite moment formulas vs sampling"};
  const bool ratios = gaussian_half_moment(5) / gaussian_half_moment(3) == 4.0 &&
                      gaussian_half_moment(7) / gaussian_half_moment(3) == 24.0;

  // Orthogonality under Gauss-Legendre on [-10, 10].
  const QuadRule& gl = gauss_legendre(96);
  double worst_orth = 0.0;
  for (int n = 0; n <= 5; ++n) {
    for (int m = 0; m <= n; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double x = 10.0 * gl.nodes[i];
        s += 10.0 * gl.weights[i] * hermite(m, x) * hermite(n, x) * std::exp(-0.5 * x * x) /
             std::sqrt(2.0 * M_PI);
      }
      double expect = 0.0;
      if (m == n) {
        expect = 1.0;
        for (int j = 2; j <= n; ++j) expect *= j;
      }
      worst_orth = std::max(worst_orth, std::abs(s - expect));
    }
  }

  // Fourth-moment formula vs direct sampling: correlated pair, orders 4/4
  // and the (2,2,2,2) pattern on two independent correlated pairs.
  const double rho = 0.6, lam = 0.45;
  const double pred44 = hermite_product_moment({4, 4}, {1, rho, rho, 1});
  const double pred2222 = hermite_product_moment(
      {2, 2, 2, 2},
      {1, 0, rho, 0, 0, 1, 0, lam, rho, 0, 1, 0, 0, lam, 0, 1});
  const int n = 2000000;
  double s44 = 0, q44 = 0, s22 = 0, q22 = 0;
  for (int i = 0; i < n; ++i) {
    double g1, g2, g3, g4;
    rng::gaussian_pair(401, 0, i, g1, g2);
    rng::gaussian_pair(401, 1, i, g3, g4);
    const double x1 = g1, x3 = rho * g1 + std::sqrt(1 - rho * rho) * g2;
    const double x2 = g3, x4 = lam * g3 + std::sqrt(1 - lam * lam) * g4;
    const double h44 = hermite(4, x1) * hermite(4, x3);
    const double h22 = hermite(2, x1) * hermite(2, x2) * hermite(2, x3) * hermite(2, x4);
    s44 += h44;
    q44 += h44 * h44;
    s22 += h22;
    q22 += h22 * h22;
  }
  const double m44 = s44 / n, se44 = std::sqrt((q44 / n - m44 * m44) / n);
  const double m22 = s22 / n, se22 = std::sqrt((q22 / n - m22 * m22) / n);
  const bool mc_ok = std::abs(m44 - pred44) <= 3 * se44 && std::abs(m22 - pred2222) <= 3 * se22;

  c.pass = ratios && worst_orth <= 1e-9 && mc_ok;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "ratios %s, orthogonality gap %.1e, H4H4 dev %.1f se, H2^4 dev %.1f se",
                ratios ? "exact" : "NO", worst_orth, std::abs(m44 - pred44) / se44,
                std::abs(m22 - pred2222) / se22);
  c.detail = buf;
  return c;
}

Criterion mean_density(const std::vector<DensityRun>& d3, const std::vector<DensityRun>& d2) {
  Criterion c{5, "mean nodal density within 3% of 1/(3 pi) [3D] and 1/(2 sqrt 2) [2D]"};
  const DensityRun* r6 = nullptr;
  for (const auto& r : d3) {
    if (r.R == 6.0) r6 = &r;
  }
  const double dens3 = r6->stats.mean_length / r6->volume;
  const double target3 = 1.0 / (3.0 * M_PI);
  const double dens2 = d2[1].stats.mean_length / d2[1].volume;
  const double target2 = 1.0 / (2.0 * std::sqrt(2.0));
  const double err3 = std::abs(dens3 / target3 - 1.0), err2 = std::abs(dens2 / target2 - 1.0);
  c.pass = err3 <= 0.03 && err2 <= 0.03;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "3D %.5f (%+.2f%%), 2D %.5f (%+.2f%%)", dens3, 100 * (dens3 / target3 - 1.0),
                dens2, 100 * (dens2 / target2 - 1.0));
  c.detail = buf;
  return c;
}

Criterion variance_linearity(const std::vector<DensityRun>& d3) {
  Criterion c{6, "Var(L)/vol positive with consecutive ratios within 25%; ledger bound positive"};
  std::vector<double> density;
  bool positive = true;
  for (const auto& r : d3) {
    density.push_back(r.stats.variance / r.volume);
    positive = positive && density.back() > 0.0;
  }
  double worst_ratio_dev = 0.0;
  for (std::size_t i = 1; i < density.size(); ++i) {
    worst_ratio_dev = std::max(worst_ratio_dev, std::abs(density[i] / density[i - 1] - 1.0));
  }
  const LedgerReport rep = assemble_lower_bound(1e-8);
  c.pass = positive && worst_ratio_dev <= 0.25 && rep.positive;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "Var/vol = %.4f, %.4f, %.4f; worst ratio dev %.0f%%; ledger bound %.2f > 0",
                density[0], density[1], density[2], 100 * worst_ratio_dev, rep.var_i4_per_volume);
  c.detail = buf;
  return c;
}

Criterion cancellation_contrast(const std::vector<DensityRun>& d2) {
  Criterion c{7, "Var(I2)/vol decreasing in 3D; 2D Var(L)/area grows with log area"};
  ExperimentConfig cfg;
  cfg.kind = "chaos";
  cfg.dim = 3;
  cfg.radii = {4.0, 6.0, 8.0};
  cfg.n_waves = 256;
  cfg.replicates = 120;
  cfg.seed = 61;
  const std::vector<ResultRow> rows = run_chaos_study(cfg);
  std::vector<double> var_i2;
  for (const auto& r : rows) {
    if (r.statistic == "var_I2_density") var_i2.push_back(r.value);
  }
  const bool decreasing = var_i2.size() == 3 && var_i2[1] < var_i2[0] && var_i2[2] < var_i2[1];

  std::vector<double> x, y, s;
  for (const auto& r : d2) {
    x.push_back(std::log(r.volume));
    y.push_back(r.stats.variance / r.volume);
    s.push_back(r.stats.stderr_variance / r.volume);
  }
  const Fit f = fit_line(x, y, s);
  const double t = f.slope / f.slope_stderr;
  c.pass = decreasing && f.slope > 0.0 && t > 2.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "Var(I2)/vol: %.4f, %.4f, %.4f; 2D slope %.4f (t = %.1f)", var_i2[0], var_i2[1],
                var_i2[2], f.slope, t);
  c.detail = buf;
  return c;
}

Criterion concentration(const std::vector<DensityRun>& d3, const std::vector<DensityRun>& d2) {
  Criterion c{8, "log(Var/E^2) slope in [-3.6, -2.4] (3D) and [-2.6, -1.4] (2D)"};
  auto slope_of = [](const std::vector<DensityRun>& runs) {
    std::vector<double> x, y, s;
    for (const auto& r : runs) {
      x.push_back(std::log(r.R));
      y.push_back(std::log(r.stats.variance / (r.stats.mean_length * r.stats.mean_length)));
      s.push_back(r.stats.stderr_variance / r.stats.variance);
    }
    return fit_line(x, y, s).slope;
  };
  const double s3 = slope_of(d3), s2 = slope_of(d2);
  c.pass = s3 >= -3.6 && s3 <= -2.4 && s2 >= -2.6 && s2 <= -1.4;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "3D slope %.3f, 2D slope %.3f", s3, s2);
  c.detail = buf;
  return c;
}

Criterion extractor_fixtures() {
  Criterion c{9, "line fixture exact to 1e-6; circle within 0.5% at h = 0.04, 3x on halving"};
  auto analytic_grid = [](double R, double h, const std::function<double(double, double, double)>& xi,
                          const std::function<double(double, double, double)>& eta) {
    const GridSpec spec = make_ball_grid(3, R, h);
    FieldGrid g;
    g.dim = 3;
    g.origin = spec.origin;
    g.h = spec.h;
    g.extents = spec.extents;
    g.xi.resize(g.n_nodes());
    g.eta.resize(g.n_nodes());
    g.grad_xi.resize(g.n_nodes());
    g.grad_eta.resize(g.n_nodes());
    for (int k = 0; k < g.extents[2]; ++k) {
      for (int j = 0; j < g.extents[1]; ++j) {
        for (int i = 0; i < g.extents[0]; ++i) {
          const auto x = g.node(i, j, k);
          g.xi[g.index(i, j, k)] = xi(x[0], x[1], x[2]);
          g.eta[g.index(i, j, k)] = eta(x[0], x[1], x[2]);
        }
      }
    }
    return g;
  };
  const auto line = analytic_grid(
      2.0, 0.25, [](double x, double, double) { return x; },
      [](double, double y, double) { return y; });
  const double line_err = std::abs(extract_nodal_curve_3d(line, 2.0).total_length - 4.0);

  const auto fz = [](double, double, double z) { return z; };
  const auto fc = [](double x, double y, double) { return x * x + y * y - 1.0; };
  const double exact = 2.0 * M_PI;
  const double e1 =
      std::abs(extract_nodal_curve_3d(analytic_grid(1.3, 0.04, fz, fc), 1.3).total_length - exact);
  const double e2 =
      std::abs(extract_nodal_curve_3d(analytic_grid(1.3, 0.02, fz, fc), 1.3).total_length - exact);
  c.pass = line_err <= 1e-6 && e1 / exact <= 0.005 && e2 * 3.0 <= e1;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "line err %.1e; circle rel err %.4f%% -> %.4f%% (ratio %.1f)",
                line_err, 100 * e1 / exact, 100 * e2 / exact, e2 > 0 ? e1 / e2 : 999.0);
  c.detail = buf;
  return c;
}

Criterion ledger_audit() {
  Criterion c{10, "ledger recomputes every published constant; mismatches only where predicted"};
  const LedgerReport rep = assemble_lower_bound(1e-8);
  // Every published reference constant must be attached to a row.
  const std::vector<double> published = {
      4362.0 / 35.0, -4.0 / 3.0,   -1184.0 / 105.0, -824.0 / 525.0,
      488.0 / 7.0,   -21.0 / 5.0,  3.0 / 4.0,       1.0 / 2.0,
      -592.0 / 105.0, -1304.0 / 3675.0, -316.0 / 735.0};
  std::vector<const LedgerEntry*> all;
  for (const auto& e : rep.terms) all.push_back(&e);
  for (const auto& e : rep.subtotals) all.push_back(&e);
  bool all_present = true;
  for (double p : published) {
    bool found = false;
    for (const auto* e : all) {
      found = found || (e->has_reference && std::abs(e->paper_value - p) < 1e-12);
    }
    all_present = all_present && found;
  }
  const std::set<std::string> predicted = {"Var(A11)", "Var(A13)",  "Cov(A21,A31)",
                                           "Cov(A23,A33)", "Var(A1)", "Cov(A2,A3)"};
  std::set<std::string> mismatched;
  bool carry_both = true;
  for (const auto* e : all) {
    if (e->flag == "mismatch") {
      mismatched.insert(e->label);
      carry_both = carry_both && e->has_reference && e->open_question && !e->note.empty();
    }
  }
  c.pass = all_present && mismatched == predicted && carry_both;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%zu published constants attached, %zu mismatches (predicted %zu), both values "
                "carried: %s",
                published.size(), mismatched.size(), predicted.size(), carry_both ? "yes" : "NO");
  c.detail = buf;
  return c;
}

}  // namespace

int main() {
  apply_thread_count(0);
  std::vector<Criterion> results;

  results.push_back(radial_table());
  results.push_back(angular_table());
  results.push_back(sampled_coefficients());
  results.push_back(moment_identities());

  const std::vector<DensityRun> d3 = run_densities(3, {4.0, 6.0, 8.0}, {600, 400, 250}, 2026);
  const std::vector<DensityRun> d2 = run_densities(2, {8.0, 16.0, 32.0}, {500, 350, 220}, 2027);

  results.push_back(mean_density(d3, d2));
  results.push_back(variance_linearity(d3));
  results.push_back(cancellation_contrast(d2));
  results.push_back(concentration(d3, d2));
  results.push_back(extractor_fixtures());
  results.push_back(ledger_audit());

  int failures = 0;
  for (const auto& c : results) {
    failures += c.pass ? 0 : 1;
    std::printf("[%s] criterion %d: %s (%s)\n", c.pass ? "PASS" : "FAIL", c.number,
                c.title.c_str(), c.detail.c_str());
  }
  if (failures) {
    std::printf("%d of %zu criteria failed\n", failures, results.size());
  } else {
    std::printf("all %zu criteria passed\n", results.size());
  }
  return failures == 0 ? 0 : 1;
}
