#include "rwm/analytic_kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace rwm {

HermiteIndex::HermiteIndex(std::vector<int> a) : alpha(std::move(a)) {
  for (int v : alpha) {
    if (v < 0) throw std::invalid_argument("HermiteIndex: negative entry");
  }
}

int HermiteIndex::order() const {
  int s = 0;
  for (int v : alpha) s += v;
  return s;
}

double HermiteIndex::factorial() const {
  double f = 1.0;
  for (int v : alpha) {
    for (int j = 2; j <= v; ++j) f *= j;
  }
  return f;
}

double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite: n < 0");
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = x;
  for (int k = 2; k <= n; ++k) {
    const double h2 = x * h1 - (k - 1) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double multi_hermite(const HermiteIndex& alpha, std::span<const double> y) {
  if (alpha.size() != y.size()) {
    throw std::invalid_argument("multi_hermite: index/vector length mismatch");
  }
  double p = 1.0;
  for (std::size_t i = 0; i < y.size(); ++i) p *= hermite(alpha.alpha[i], y[i]);
  return p;
}

double delta_coefficient(int alpha) {
  if (alpha < 0) throw std::invalid_argument("delta_coefficient: alpha < 0");
  double fact = 1.0;
  for (int j = 2; j <= alpha; ++j) fact *= j;
  return hermite(alpha, 0.0) / (fact * std::sqrt(2.0 * M_PI));
}

KernelValue sinc_kernel(double u) {
  KernelValue kv;
  if (u < kSincSeriesThreshold) {
    const double u2 = u * u;
    const double u4 = u2 * u2;
    const double u6 = u4 * u2;
    const double u8 = u4 * u4;
    kv.r = 1.0 - u2 / 6.0 + u4 / 120.0 - u6 / 5040.0 + u8 / 362880.0;
    kv.r1 = u * (-1.0 / 3.0 + u2 / 30.0 - u4 / 840.0 + u6 / 45360.0);
    kv.r2 = -1.0 / 3.0 + u2 / 10.0 - u4 / 168.0 + u6 / 6480.0 - u8 / 443520.0;
    kv.B = -1.0 / 3.0 + u2 / 30.0 - u4 / 840.0 + u6 / 45360.0 - u8 / 3991680.0;
    kv.A = -u2 / 15.0 + u4 / 210.0 - u6 / 7560.0 + u8 / 498960.0;
  } else {
    const double s = std::sin(u);
    const double c = std::cos(u);
    const double u2 = u * u;
    kv.r = s / u;
    kv.r1 = (u * c - s) / u2;
    kv.r2 = -kv.r + 2.0 * kv.r / u2 - 2.0 * c / u2;
    kv.B = kv.r1 / u;
    kv.A = kv.B - kv.r2;
  }
  return kv;
}

double gaussian_half_moment(int k) {
  if (k < 0) throw std::invalid_argument("gaussian_half_moment: k < 0");
  double m0 = 0.5;                          // m_0
  double m1 = 1.0 / std::sqrt(2.0 * M_PI);  // m_1
  if (k == 0) return m0;
  if (k == 1) return m1;
  // m_{j+1} = j * m_{j-1}
  for (int j = 1; j < k; ++j) {
    const double next = j * m0;
    m0 = m1;
    m1 = next;
  }
  return m1;
}

double bessel_j0(double x) {
  if (x < 0) throw std::invalid_argument("bessel_j0: x < 0");
  if (x <= 12.0) {
    // Power series sum_k (-x^2/4)^k / (k!)^2, accumulated in extended
    // precision to tame cancellation near the seam.
    const long double q = -(long double)x * x / 4.0L;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 60; ++k) {
      term *= q / ((long double)k * k);
      sum += term;
      if (std::abs((double)term) < 1e-18 * (1.0 + std::abs((double)sum))) break;
    }
    return (double)sum;
  }
  // Hankel asymptotic expansion J0 = sqrt(2/(pi z)) [P cos chi - Q sin chi],
  // chi = z - pi/4; terms t_m with t_{m+1} = -t_m (2m+1)^2 / (8 z (m+1)),
  // truncated at the smallest term (optimal truncation).
  const long double z = x;
  long double P = 0.0L, Q = 0.0L;
  long double t = 1.0L;
  for (int m = 0; m < 40; ++m) {
    const long double sign = (m / 2) % 2 == 0 ? 1.0L : -1.0L;
    if (m % 2 == 0) P += sign * t;
    else Q += sign * t;
    const long double next = -t * (2.0L * m + 1.0L) * (2.0L * m + 1.0L) /
                             (8.0L * z * (m + 1.0L));
    if (std::abs((double)next) >= std::abs((double)t)) break;
    t = next;
  }
  const long double chi = z - M_PIl / 4.0L;
  return (double)(std::sqrt(2.0L / (M_PIl * z)) *
                  (P * std::cos(chi) - Q * std::sin(chi)));
}

}  // namespace rwm
