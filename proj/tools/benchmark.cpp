#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rwm/chaos_coefficients.hpp"
#include "rwm/nodal_geometry.hpp"
#include "rwm/wavefield.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled\n");
#endif

  for (double R : {4.0, 6.0, 8.0}) {
    auto [xi, eta] = rwm::sample_ensemble(3, 256, 7);
    const rwm::GridSpec spec = rwm::make_ball_grid(3, R, 2.0 * M_PI / 12.0);

    auto t0 = std::chrono::steady_clock::now();
    const rwm::FieldGrid fast = rwm::evaluate_grid(xi, eta, spec);
    const double t_fast = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const rwm::FieldGrid ref = rwm::evaluate_grid_serial(xi, eta, spec);
    const double t_ref = seconds_since(t0);

    double max_diff = 0.0;
    for (std::size_t i = 0; i < fast.n_nodes(); ++i) {
      max_diff = std::max(max_diff, std::abs(fast.xi[i] - ref.xi[i]));
      max_diff = std::max(max_diff, std::abs(fast.eta[i] - ref.eta[i]));
      for (int c = 0; c < 3; ++c) {
        max_diff = std::max(max_diff, std::abs(fast.grad_xi[i][c] - ref.grad_xi[i][c]));
        max_diff = std::max(max_diff, std::abs(fast.grad_eta[i][c] - ref.grad_eta[i][c]));
      }
    }
    t0 = std::chrono::steady_clock::now();
    const rwm::NodalCurve curve = rwm::extract_nodal_curve_3d(fast, R);
    const double t_extract = seconds_since(t0);

    std::printf(
        "R=%.0f grid %dx%dx%d: synth %.1f ms (serial reference %.1f ms, x%.1f, "
        "max diff %.1e); extraction %.1f ms, length %.2f\n",
        R, spec.extents[0], spec.extents[1], spec.extents[2], 1e3 * t_fast, 1e3 * t_ref,
        t_ref / t_fast, max_diff, 1e3 * t_extract, curve.total_length);
  }

  auto t0 = std::chrono::steady_clock::now();
  const rwm::CoefficientEstimate est =
      rwm::mc_a_coefficient(rwm::HermiteIndex{{0, 0, 0, 0, 0, 0}}, 4000000, 1);
  std::printf("coefficient MC 4e6 samples: %.2f s (value %.5f +- %.5f)\n", seconds_since(t0),
              est.value, est.stderr_);
  return 0;
}
