#pragma once

#include <string>
#include <vector>

#include "rwm/experiment_config.hpp"

namespace rwm {

struct ResultRow {
  std::string experiment_id;
  std::string kind;
  int dim = 3;
  double R = 0.0;
  std::string statistic;
  double value = 0.0;
  double stderr_ = 0.0;
  double paper_value = 0.0;  // reference constant, if any
  bool has_paper_value = false;
  std::string flag;  // "ok" | "mismatch" | "n/a"
  /// True when the mismatch is an expected, documented discrepancy of the
  /// reference material; such rows do not fail the suite.
  bool open_question = false;
};

/// One row per checked constant: radial integrals, angular sums, moment
/// identities, closed-form coefficients vs Monte Carlo, and the full
/// variance ledger.  Rows flagged mismatch with open_question unset are
/// regressions.
std::vector<ResultRow> run_verification_suite(double tolerance);

/// Nodal-length Monte Carlo per radius: mean/vol and variance/vol.
std::vector<ResultRow> run_simulation(const ExperimentConfig& config);

struct ScalingResult {
  std::vector<ResultRow> rows;
  double slope = 0.0;
  double slope_stderr = 0.0;
};

/// Regression of log(Var(L)/E[L]^2) on log R across the configured radii.
ScalingResult run_scaling_study(const ExperimentConfig& config);

/// Empirical Var(I2)/vol and Var(I4)/vol per radius, with the assembled
/// ledger constant attached for comparison.
std::vector<ResultRow> run_chaos_study(const ExperimentConfig& config);

/// Fixed-column CSV: experiment_id, kind, dim, R, statistic, value,
/// stderr, paper_value, flag.  The body is byte-identical across reruns;
/// the timestamp lives in a leading comment line.
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);

/// Resolves the worker count: explicit argument > RWM_THREADS > default;
/// applies it to the OpenMP runtime and returns the value used.
int apply_thread_count(int requested);

/// True if any row is a mismatch outside the documented open-question set.
bool has_regressions(const std::vector<ResultRow>& rows);

}  // namespace rwm
