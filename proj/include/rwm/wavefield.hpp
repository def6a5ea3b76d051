#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rwm {

/// Superposition of n plane waves with unit wavenumber:
///   f(x) = amplitude * sum_n cos(<u_n, x> + phi_n),
/// directions uniform on the unit sphere (circle in 2D).  amplitude =
/// sqrt(2/n) makes Var f(x) = 1; the covariance converges to sinc (3D) or
/// J0 (2D) as n grows.
struct PlaneWaveEnsemble {
  int dim = 3;
  std::vector<std::array<double, 3>> directions;  // z component 0 in 2D
  std::vector<double> phases;                     // in [0, 2 pi)
  double amplitude = 0.0;
  std::uint64_t seed = 0;
};

/// Draws the two independent field components (xi, eta) from disjoint
/// random streams.  stream_base selects a replicate: different values give
/// independent draws under the same seed.
std::pair<PlaneWaveEnsemble, PlaneWaveEnsemble> sample_ensemble(
    int dim, int n_waves, std::uint64_t seed, std::uint64_t stream_base = 0);

/// Exact analytic value and gradient of the cosine sum.
std::pair<double, std::array<double, 3>> eval_field_and_gradient(
    const PlaneWaveEnsemble& ensemble, const std::array<double, 3>& x);

struct GridSpec {
  std::array<double, 3> origin{};
  double h = 0.0;
  std::array<int, 3> extents{};  // node counts; extents[2] = 1 in 2D
};

/// Axis-aligned node grid covering the ball of radius R with one spare cell
/// of margin on every side.
GridSpec make_ball_grid(int dim, double R, double h);

/// Sampled values and analytic gradients of both components on a grid.
/// Node (i, j, k) sits at origin + h * (i, j, k) and is stored at flat
/// index (k * ny + j) * nx + i.
struct FieldGrid {
  int dim = 3;
  std::array<double, 3> origin{};
  double h = 0.0;
  std::array<int, 3> extents{};
  std::vector<double> xi, eta;
  std::vector<std::array<double, 3>> grad_xi, grad_eta;

  std::size_t n_nodes() const {
    return std::size_t(extents[0]) * extents[1] * extents[2];
  }
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(k) * extents[1] + j) * extents[0] + i;
  }
  std::array<double, 3> node(int i, int j, int k) const {
    return {origin[0] + h * i, origin[1] + h * j, origin[2] + h * k};
  }
};

/// Grid synthesis via per-axis complex exponentials, parallel over nodes.
/// Each node accumulates its wave sum independently in a fixed order, so
/// the result is bitwise identical for any thread count.
FieldGrid evaluate_grid(const PlaneWaveEnsemble& xi, const PlaneWaveEnsemble& eta,
                        const GridSpec& spec);

/// Reference implementation: direct trigonometric evaluation per node,
/// single threaded.  Kept for testing and benchmarking against
/// evaluate_grid.
FieldGrid evaluate_grid_serial(const PlaneWaveEnsemble& xi, const PlaneWaveEnsemble& eta,
                               const GridSpec& spec);

/// Ground-truth sampler: joint Gaussian draws of (xi, eta) on a fixed point
/// cloud through a Cholesky factorization of the exact covariance matrix.
class ExactGaussianSampler {
 public:
  ExactGaussianSampler(std::vector<std::array<double, 3>> points, int dim);
  std::pair<std::vector<double>, std::vector<double>> sample(
      std::uint64_t seed, std::uint64_t replicate = 0) const;
  std::size_t size() const { return n_; }

 private:
  std::vector<std::array<double, 3>> points_;
  int dim_;
  std::size_t n_;
  std::vector<double> chol_;  // lower-triangular factor, row-major
};

/// One joint draw on the point cloud (convenience wrapper).
std::pair<std::vector<double>, std::vector<double>> exact_gaussian_sample(
    const std::vector<std::array<double, 3>>& points, int dim, std::uint64_t seed);

/// Riemann-sum approximation of the chaotic component I_{2q}(B_R) from the
/// sampled field, q in {1, 2}, using the exact c coefficients on
/// Y = (xi, eta, sqrt(3) grad xi, sqrt(3) grad eta).  3D only.
double chaos_projection(const FieldGrid& grid, int q, double R);

/// Flat little-endian binary dump (xi, eta, gradients) with a JSON sidecar
/// describing the layout; writes path and path + ".json".
void write_field_grid(const FieldGrid& grid, const std::string& path);

}  // namespace rwm
