#include "rwm/variance_ledger.hpp"

#include <cmath>
#include <sstream>

#include "rwm/analytic_kernels.hpp"

#include "json.hpp"

namespace rwm {

KernelDerivatives kernel_derivatives(const std::array<double, 3>& d) {
  const double u = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  const KernelValue kv = sinc_kernel(u);
  std::array<double, 3> delta{0.0, 0.0, 0.0};
  if (u > 0.0) {
    delta = {d[0] / u, d[1] / u, d[2] / u};
  }
  KernelDerivatives out;
  out.r = kv.r;
  for (int k = 0; k < 3; ++k) {
    out.grad_x[k] = kv.r1 * delta[k];
    out.grad_y[k] = -out.grad_x[k];
    for (int j = 0; j < 3; ++j) {
      out.hess[k][j] = kv.A * delta[k] * delta[j] - (k == j ? kv.B : 0.0);
    }
  }
  return out;
}

namespace {

using K = RadialKernel;
using S = AngularPattern::Summation;

RadialKernelSpec rs(std::vector<RadialFactor> f) { return {std::move(f), 2}; }
AngularPattern ap(S s, std::vector<int> e) { return {s, std::move(e)}; }

}  // namespace

std::vector<ChaosTerm> i4_term_catalog() {
  std::vector<ChaosTerm> c;
  auto add = [&](const char* label, Rational coeff, RadialKernelSpec radial,
                 AngularPattern angular, bool nonneg = false) {
    c.push_back({label, coeff, std::move(radial), std::move(angular), nonneg});
  };

  // --- Var(A1) block ------------------------------------------------------
  // H4(field) x H4(field): 4!/64 * r^4.
  add("Var(A11)", {3, 8}, rs({{K::sinc, 4}}), ap(S::single, {}));
  // H2 H2 cross-field: (1/16) * 4 * r^4.
  add("Var(A13)", {1, 4}, rs({{K::sinc, 4}}), ap(S::single, {}));
  // H4(field) x H4(scaled derivative): -(5/72) * 24 * 9 * dsinc^4 D_k^4.
  add("Cov(A11,A14)", {-15, 1}, rs({{K::dsinc, 4}}), ap(S::sum_over_k, {4}));
  // H4(derivative) x H4(derivative): (25/81) * 24 * 81 = 600 times
  // sum_{k,k'} r_{kk'}^4; the diagonal expands (A D^2 - B)^4.
  add("Var(A14)", {600, 1}, rs({{K::kernel_a, 4}}), ap(S::sum_over_k, {8}));
  add("Var(A14)", {-2400, 1}, rs({{K::kernel_a, 3}, {K::kernel_b, 1}}), ap(S::sum_over_k, {6}));
  add("Var(A14)", {3600, 1}, rs({{K::kernel_a, 2}, {K::kernel_b, 2}}), ap(S::sum_over_k, {4}));
  add("Var(A14)", {-2400, 1}, rs({{K::kernel_a, 1}, {K::kernel_b, 3}}), ap(S::sum_over_k, {2}));
  add("Var(A14)", {600, 1}, rs({{K::kernel_b, 4}}), ap(S::sum_over_k, {}));
  add("Var(A14)", {600, 1}, rs({{K::kernel_a, 4}}), ap(S::sum_over_distinct_pairs, {4, 4}));

  // --- Cov(A1,A2) block ---------------------------------------------------
  // (1/8)(-1/6) * 3 * 4! * sinc^2 dsinc^2 D_k^2.
  add("Cov(A11,A21)", {-3, 2}, rs({{K::sinc, 2}, {K::dsinc, 2}}), ap(S::sum_over_k, {2}));
  // (1/4)(-1/6) * 12 * sinc^2 dsinc^2 D_k^2.
  add("Cov(A13,A23)", {-1, 2}, rs({{K::sinc, 2}, {K::dsinc, 2}}), ap(S::sum_over_k, {2}));
  // (5/54) * 27 * 4! = 60 times sum_{k,k'} r_{k0}^2 r_{kk'}^2 (nonnegative).
  add("Cov(A14,A21)", {60, 1}, rs({{K::dsinc, 2}, {K::kernel_a, 2}}),
      ap(S::sum_over_distinct_pairs, {4, 2}), true);
  add("Cov(A14,A21)", {60, 1}, rs({{K::dsinc, 2}, {K::kernel_a, 2}}), ap(S::sum_over_k, {6}), true);
  add("Cov(A14,A21)", {-120, 1}, rs({{K::dsinc, 2}, {K::kernel_a, 1}, {K::kernel_b, 1}}),
      ap(S::sum_over_k, {4}), true);
  add("Cov(A14,A21)", {60, 1}, rs({{K::dsinc, 2}, {K::kernel_b, 2}}), ap(S::sum_over_k, {2}), true);

  // --- Cov(A1,A3) block ---------------------------------------------------
  // (1/72) * 9 * 4! = 3 times dsinc^4 D_i^2 D_j^2 (nonnegative).
  add("Cov(A11,A31)", {3, 1}, rs({{K::dsinc, 4}}), ap(S::sum_over_distinct_pairs, {2, 2}), true);
  add("Cov(A13,A33)", {1, 1}, rs({{K::dsinc, 4}}), ap(S::sum_over_distinct_pairs, {2, 2}), true);
  // (-5/81) * 81 * 4! = -120 times sum_k sum_{i!=j} r_{kk}-type products.
  add("Cov(A14,A31)", {-120, 1}, rs({{K::kernel_a, 4}}),
      ap(S::sum_over_distinct_triples, {4, 2, 2}));
  add("Cov(A14,A31)", {-240, 1}, rs({{K::kernel_a, 4}}), ap(S::sum_over_distinct_pairs, {6, 2}));
  add("Cov(A14,A31)", {480, 1}, rs({{K::kernel_a, 3}, {K::kernel_b, 1}}),
      ap(S::sum_over_distinct_pairs, {4, 2}));
  add("Cov(A14,A31)", {-240, 1}, rs({{K::kernel_a, 2}, {K::kernel_b, 2}}),
      ap(S::sum_over_distinct_pairs, {2, 2}));

  // --- Cov(A2,A3) block ---------------------------------------------------
  add("Cov(A21,A31)", {-12, 1}, rs({{K::dsinc, 2}, {K::kernel_a, 2}}),
      ap(S::sum_over_distinct_triples, {2, 2, 2}));
  add("Cov(A21,A31)", {-24, 1}, rs({{K::dsinc, 2}, {K::kernel_a, 2}}),
      ap(S::sum_over_distinct_pairs, {4, 2}));
  add("Cov(A21,A31)", {24, 1}, rs({{K::dsinc, 2}, {K::kernel_a, 1}, {K::kernel_b, 1}}),
      ap(S::sum_over_distinct_pairs, {2, 2}));
  add("Cov(A21,A31)", {-4, 1}, rs({{K::dsinc, 2}, {K::kernel_b, 2}}),
      ap(S::sum_over_distinct_pairs, {0, 2}));
  add("Cov(A23,A33)", {-2, 1}, rs({{K::dsinc, 2}, {K::kernel_a, 2}}),
      ap(S::sum_over_distinct_triples, {2, 2, 2}));
  add("Cov(A23,A33)", {-4, 1}, rs({{K::dsinc, 2}, {K::kernel_a, 2}}),
      ap(S::sum_over_distinct_pairs, {4, 2}));
  add("Cov(A23,A33)", {4, 1}, rs({{K::dsinc, 2}, {K::kernel_a, 1}, {K::kernel_b, 1}}),
      ap(S::sum_over_distinct_pairs, {2, 2}));
  add("Cov(A23,A33)", {-2, 1}, rs({{K::dsinc, 2}, {K::kernel_b, 2}}),
      ap(S::sum_over_distinct_pairs, {0, 2}));

  return c;
}

double evaluate_term(const ChaosTerm& term, double tolerance) {
  const IntegralResult radial = radial_integral(term.radial, tolerance);
  const PiRational angular = angular_pattern_sum(term.angular);
  return term.coefficient.value() * radial.value * angular.value() / (M_PI * M_PI);
}

double evaluate_label(const std::vector<ChaosTerm>& catalog, const std::string& label,
                      double tolerance) {
  double sum = 0.0;
  bool found = false;
  for (const auto& t : catalog) {
    if (t.label == label) {
      sum += evaluate_term(t, tolerance);
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("evaluate_label: unknown label " + label);
  return sum;
}

namespace {

struct Reference {
  const char* label;
  double paper_value;
  bool open_question;
  const char* note;
};

// Published block constants and whether a mismatch is expected.  The
// open-question entries come in two groups: the r^4 overlap constants
// (published with a factor 2 that contradicts the display's own radial
// reduction) and one covariance chain whose published angular constant
// (12 pi, where the six ordered index pairs give 8 pi) and final gathering
// disagree with its own component values.  Both groups are re-derived here
// by the quadrature pipeline and double-checked in the test suite by a
// direct product-moment oracle.
const Reference kTermRefs[] = {
    {"Var(A11)", 3.0 / 4.0, true, "published r^4 constant carries a factor 2"},
    {"Var(A13)", 1.0 / 2.0, true, "published r^4 constant carries a factor 2"},
    {"Cov(A11,A14)", -21.0 / 5.0, false, ""},
    {"Var(A14)", 488.0 / 7.0, false, ""},
    {"Cov(A11,A21)", -1.0 / 2.0, false, ""},
    {"Cov(A13,A23)", -1.0 / 6.0, false, ""},
    {"Cov(A14,A31)", -592.0 / 105.0, false, ""},
    {"Cov(A21,A31)", -1304.0 / 3675.0, true,
     "published derivation uses 12 pi for a six-pair angular sum (8 pi), writes "
     "dsinc^4 for a cross term whose kernel correlations give dsinc^2 A^2, and "
     "its final gathering disagrees with its own case values"},
    {"Cov(A23,A33)", -316.0 / 735.0, true,
     "published value inherits the 12 pi angular sum inconsistency"},
};

LedgerEntry make_entry(const std::string& label, double value, const Reference* ref,
                       double rel_tol) {
  LedgerEntry e;
  e.label = label;
  e.value = value;
  if (ref == nullptr) {
    e.flag = "n/a";
    return e;
  }
  e.paper_value = ref->paper_value;
  e.has_reference = true;
  e.open_question = ref->open_question;
  e.note = ref->note;
  const double diff = std::abs(value - ref->paper_value);
  e.flag = diff <= rel_tol * std::max(1.0, std::abs(ref->paper_value)) ? "ok" : "mismatch";
  return e;
}

}  // namespace

LedgerReport assemble_lower_bound(double tolerance) {
  const auto catalog = i4_term_catalog();
  const double rel_tol = 1e-6;

  std::vector<std::string> labels;
  for (const auto& t : catalog) {
    if (labels.empty() || labels.back() != t.label) labels.push_back(t.label);
  }

  LedgerReport rep;
  auto value_of = [&](const std::string& label) {
    return evaluate_label(catalog, label, tolerance);
  };
  std::vector<std::pair<std::string, double>> vals;
  for (const auto& l : labels) vals.emplace_back(l, value_of(l));
  auto lookup = [&](const std::string& l) {
    for (const auto& [name, v] : vals) {
      if (name == l) return v;
    }
    throw std::logic_error("ledger: missing label " + l);
  };

  for (const auto& [name, v] : vals) {
    const Reference* ref = nullptr;
    for (const auto& r : kTermRefs) {
      if (name == r.label) ref = &r;
    }
    rep.terms.push_back(make_entry(name, v, ref, rel_tol));
  }

  // Block subtotals with symmetry multiplicities; the covariance blocks keep
  // only their negative parts (the nonnegative terms are dropped to keep the
  // assembly a lower bound, but are reported above).
  const double var_a1 = 2.0 * lookup("Var(A11)") + lookup("Var(A13)") +
                        2.0 * lookup("Var(A14)") + 4.0 * lookup("Cov(A11,A14)");
  const double cov_a1a2 = 2.0 * lookup("Cov(A11,A21)") + 2.0 * lookup("Cov(A13,A23)");
  const double cov_a1a3 = 2.0 * lookup("Cov(A14,A31)");
  const double cov_a2a3 = 2.0 * lookup("Cov(A21,A31)") + 2.0 * lookup("Cov(A23,A33)");

  const Reference var_a1_ref = {"Var(A1)", 4362.0 / 35.0, true,
                                "inherits the r^4 factor-2 constants"};
  const Reference a1a2_ref = {"Cov(A1,A2) bound part", -4.0 / 3.0, false, ""};
  const Reference a1a3_ref = {"Cov(A1,A3) bound part", -1184.0 / 105.0, false, ""};
  const Reference a2a3_ref = {"Cov(A2,A3)", -824.0 / 525.0, true,
                              "inherits the angular sum inconsistency"};
  rep.subtotals.push_back(make_entry("Var(A1)", var_a1, &var_a1_ref, rel_tol));
  rep.subtotals.push_back(make_entry("Cov(A1,A2) bound part", cov_a1a2, &a1a2_ref, rel_tol));
  rep.subtotals.push_back(make_entry("Cov(A1,A3) bound part", cov_a1a3, &a1a3_ref, rel_tol));
  rep.subtotals.push_back(make_entry("Cov(A2,A3)", cov_a2a3, &a2a3_ref, rel_tol));

  rep.assembled_bound = var_a1 + 2.0 * cov_a1a2 + 2.0 * cov_a1a3 + 2.0 * cov_a2a3;
  rep.var_i4_per_volume = rep.assembled_bound / 4.0;
  rep.reference_bound = 7691.0 / 350.0;
  rep.positive = rep.assembled_bound > 0.0;
  return rep;
}

std::string LedgerReport::to_json() const {
  nlohmann::json j;
  auto entry_json = [](const LedgerEntry& e) {
    nlohmann::json je;
    je["label"] = e.label;
    je["value"] = e.value;
    if (e.has_reference) {
      je["reference_value"] = e.paper_value;
      je["open_question"] = e.open_question;
    }
    je["flag"] = e.flag;
    if (!e.note.empty()) je["note"] = e.note;
    return je;
  };
  for (const auto& e : terms) j["terms"].push_back(entry_json(e));
  for (const auto& e : subtotals) j["subtotals"].push_back(entry_json(e));
  j["assembled_bound"] = assembled_bound;
  j["var_i4_per_volume"] = var_i4_per_volume;
  j["reference_bound"] = reference_bound;
  j["positive"] = positive;
  // Coefficients of the underlying catalog, exact.
  for (const auto& t : i4_term_catalog()) {
    nlohmann::json jt;
    jt["label"] = t.label;
    jt["coefficient"] = t.coefficient.str();
    jt["radial"] = t.radial.str();
    jt["nonnegative"] = t.sign_known_nonnegative;
    j["catalog"].push_back(jt);
  }
  return j.dump(2);
}

double expected_length_density() { return 1.0 / (3.0 * M_PI); }

}  // namespace rwm
