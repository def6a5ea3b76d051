#pragma once

#include <span>
#include <vector>

namespace rwm {

/// The cardinal-sine covariance kernel and its derived quantities at a
/// single (nonnegative, dimensionless) argument u.
///
/// r  = sinc(u)
/// r1 = sinc'(u)
/// r2 = sinc''(u)
/// A  = sinc'(u)/u - sinc''(u)
/// B  = sinc'(u)/u
///
/// All five fields are finite and smooth through u = 0 (Taylor branch).
struct KernelValue {
  double r;
  double r1;
  double r2;
  double A;
  double B;
};

/// Multi-index in N^m with |alpha| and alpha! helpers.
struct HermiteIndex {
  std::vector<int> alpha;

  explicit HermiteIndex(std::vector<int> a);
  int order() const;
  double factorial() const;  // alpha! = prod alpha_i!
  std::size_t size() const { return alpha.size(); }
};

/// Probabilists' Hermite polynomial H_n(x) by forward recurrence.
double hermite(int n, double x);

/// Product H_alpha1(y_1) * ... * H_alpham(y_m). Throws on length mismatch.
double multi_hermite(const HermiteIndex& alpha, std::span<const double> y);

/// b_alpha = H_alpha(0) / (alpha! sqrt(2 pi)).
double delta_coefficient(int alpha);

/// Switch point between the Taylor branch and the closed forms.
constexpr double kSincSeriesThreshold = 1e-2;

KernelValue sinc_kernel(double u);

/// m_k = int_0^inf rho^k phi(rho) drho, phi the standard normal density.
double gaussian_half_moment(int k);

/// Bessel J_0 to about 1e-12 absolute (series for x <= 12, Hankel
/// asymptotics beyond).
double bessel_j0(double x);

}  // namespace rwm
