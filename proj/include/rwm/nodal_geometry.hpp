#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rwm/experiment_config.hpp"
#include "rwm/wavefield.hpp"

namespace rwm {

struct NodalCurve {
  using Segment = std::pair<std::array<double, 3>, std::array<double, 3>>;
  std::vector<Segment> segments;
  double total_length = 0.0;
  std::int64_t degenerate_cells = 0;  // skipped with a tally, never fatal
  std::int64_t total_cells = 0;
};

/// Zero curve {xi = eta = 0} inside the ball of radius R.  Each cube cell
/// splits into 6 tetrahedra (fixed Kuhn pattern along the main diagonal);
/// both fields are replaced by their linear interpolants on each
/// tetrahedron, whose common zero set is a single segment found by solving
/// the 2x2 restriction on each face; segments are clipped to the ball by
/// the exact quadratic.
NodalCurve extract_nodal_curve_3d(const FieldGrid& grid, double R);

/// Zero lines {xi = 0} of the scalar component inside the square
/// [-R, R]^2: marching squares with linear edge interpolation; ambiguous
/// saddles resolved by the bilinear cell-center value.
NodalCurve extract_nodal_lines_2d(const FieldGrid& grid, double R);

struct NodalStatistics {
  double R = 0.0;
  int n_replicates = 0;
  double mean_length = 0.0;
  double variance = 0.0;
  double stderr_mean = 0.0;
  double stderr_variance = 0.0;
};

/// Replicate loop: sample ensembles, synthesize the grid, extract the
/// nodal set, accumulate length statistics.  Deterministic for fixed
/// (config.seed, R) across thread counts.
NodalStatistics mc_nodal_statistics(const ExperimentConfig& config, double R);

/// Per-replicate nodal length, reproducible: replicate r uses stream base
/// r of the configured seed.
double nodal_length_replicate(const ExperimentConfig& config, double R, std::uint64_t replicate);

/// Wavefront-style line list: "v x y z" vertices then "l i j" records.
void write_curve_obj(const NodalCurve& curve, const std::string& path);

}  // namespace rwm
