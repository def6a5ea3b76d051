#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rwm {

struct ExperimentConfig {
  std::string kind = "verify";  // verify | simulate | chaos | scaling
  int dim = 3;
  std::vector<double> radii;  // ascending
  int n_waves = 256;
  double grid_spacing = 2.0 * 3.14159265358979323846 / 12.0;
  int replicates = 200;
  std::uint64_t seed = 1;
  double tolerance = 1e-8;
  std::string output;

  /// Throws std::invalid_argument with a message on any violated invariant.
  void validate() const;
};

}  // namespace rwm
