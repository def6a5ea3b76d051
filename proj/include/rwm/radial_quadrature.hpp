#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rwm {

enum class RadialKernel { sinc, dsinc, kernel_a, kernel_b };

struct RadialFactor {
  RadialKernel kernel;
  int power;  // >= 1
};

/// Integrand description: product of kernel-function powers times
/// rho^weight_exponent.  The tail of the improper integral converges
/// absolutely iff decay_degree() >= 2 (kernel decay orders in 1/rho:
/// sinc, sinc', A -> 1; B -> 2).
struct RadialKernelSpec {
  std::vector<RadialFactor> factors;
  int weight_exponent = 2;

  int decay_degree() const;
  bool tail_convergent() const { return decay_degree() >= 2; }
  /// Product of the kernel factors only (no rho^weight).
  double eval_factors(double rho) const;
  std::string str() const;
};

struct IntegralResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int cells_used = 0;
};

/// Thrown when the cell budget is exhausted before reaching the requested
/// tolerance; carries the best estimate obtained.
struct ConvergenceError : std::runtime_error {
  IntegralResult best;
  explicit ConvergenceError(const IntegralResult& b)
      : std::runtime_error("radial_integral: tolerance unreachable within cell budget"),
        best(b) {}
};

/// Improper integral of the kernel product over [0, inf): Gauss-Legendre over period
/// cells of length 2*pi plus an asymptotic-series tail fit.
IntegralResult radial_integral(const RadialKernelSpec& spec, double tolerance);

/// vol(B_R intersect (B_R + rho e)), exact closed form.
double ball_covariogram(double R, double rho);

/// Integral over B_R x B_R of g(|x-y|) with g the kernel-factor product,
/// reduced through the ball covariogram.  weight_exponent is ignored; the
/// rho^2 surface-area weight is supplied by the reduction itself.
double overlap_integral(double R, const RadialKernelSpec& spec);

/// The constant c with overlap_integral(R, spec) ~ (4 pi R^3 / 3) * c,
/// namely 4 pi times the improper radial integral with weight rho^2.
double leading_order_constant(const RadialKernelSpec& spec);

}  // namespace rwm
