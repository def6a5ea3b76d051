#include <cmath>
#include <vector>

#include "doctest.h"
#include "rwm/analytic_kernels.hpp"
#include "rwm/gauss.hpp"
#include "rwm/rng.hpp"

using namespace rwm;

TEST_CASE("kernel limits at zero") {
  const KernelValue k = sinc_kernel(0.0);
  CHECK(k.r == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k.r1 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(k.r2 == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(k.B == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(k.A == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("kernel values at pi") {
  const KernelValue k = sinc_kernel(M_PI);
  CHECK(k.r == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(k.r1 == doctest::Approx(-1.0 / M_PI).epsilon(1e-14));
  CHECK(k.B == doctest::Approx(-1.0 / (M_PI * M_PI)).epsilon(1e-14));
  CHECK(k.A == doctest::Approx(-3.0 / (M_PI * M_PI)).epsilon(1e-14));
}

TEST_CASE("series and closed-form branches agree at the seam") {
  for (double u : {0.5 * kSincSeriesThreshold, 0.9 * kSincSeriesThreshold,
                   1.0001 * kSincSeriesThreshold, 2.0 * kSincSeriesThreshold}) {
    const KernelValue k = sinc_kernel(u);
    CHECK(k.r == doctest::Approx(std::sin(u) / u).epsilon(1e-14));
    CHECK(k.r1 == doctest::Approx((u * std::cos(u) - std::sin(u)) / (u * u)).epsilon(1e-11));
    CHECK(k.B == doctest::Approx(k.r1 / u).epsilon(1e-10));
    CHECK(k.A == doctest::Approx(k.B - k.r2).epsilon(1e-10));
  }
}

TEST_CASE("sinc satisfies the radial Helmholtz identity") {
  for (double u : {0.3, 1.0, 2.5, 7.0, 30.0}) {
    const KernelValue k = sinc_kernel(u);
    CHECK(k.r2 + 2.0 * k.r1 / u == doctest::Approx(-k.r).epsilon(1e-12));
  }
}

TEST_CASE("hermite polynomials: known values and recurrence") {
  CHECK(hermite(0, 1.7) == 1.0);
  CHECK(hermite(1, 1.7) == 1.7);
  CHECK(hermite(2, 1.7) == doctest::Approx(1.7 * 1.7 - 1.0));
  CHECK(hermite(3, 2.0) == doctest::Approx(8.0 - 3.0 * 2.0));
  CHECK(hermite(4, 0.0) == doctest::Approx(3.0));
  CHECK(hermite(6, 0.0) == doctest::Approx(-15.0));
  for (double x : {-2.0, -0.3, 0.0, 1.1, 3.0}) {
    for (int n = 1; n < 8; ++n) {
      CHECK(hermite(n + 1, x) ==
            doctest::Approx(x * hermite(n, x) - n * hermite(n - 1, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("hermite orthogonality under the Gaussian weight") {
  // Gauss-Legendre on [-10, 10] resolves the integrand to ~1e-12.
  const QuadRule& gl = gauss_legendre(96);
  auto inner = [&](int m, int n) {
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double x = 10.0 * gl.nodes[i];
      s += 10.0 * gl.weights[i] * hermite(m, x) * hermite(n, x) *
           std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    }
    return s;
  };
  double fact = 1.0;
  for (int n = 0; n <= 6; ++n) {
    if (n) fact *= n;
    CHECK(inner(n, n) == doctest::Approx(fact).epsilon(1e-9));
    for (int m = 0; m < n; ++m) CHECK(inner(m, n) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("multi_hermite and HermiteIndex helpers") {
  HermiteIndex alpha{{2, 0, 1}};
  CHECK(alpha.order() == 3);
  CHECK(alpha.factorial() == doctest::Approx(2.0));
  const std::vector<double> y = {1.5, -0.2, 0.7};
  CHECK(multi_hermite(alpha, y) == doctest::Approx((1.5 * 1.5 - 1.0) * 1.0 * 0.7));
  CHECK_THROWS(multi_hermite(alpha, std::vector<double>{1.0, 2.0}));
}

TEST_CASE("delta coefficients") {
  const double inv = 1.0 / std::sqrt(2.0 * M_PI);
  CHECK(delta_coefficient(0) == doctest::Approx(inv));
  CHECK(delta_coefficient(1) == 0.0);
  CHECK(delta_coefficient(2) == doctest::Approx(-inv / 2.0));
  CHECK(delta_coefficient(3) == 0.0);
  CHECK(delta_coefficient(4) == doctest::Approx(3.0 * inv / 24.0));
}

TEST_CASE("gaussian half moments") {
  CHECK(gaussian_half_moment(0) == doctest::Approx(0.5));
  CHECK(gaussian_half_moment(1) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)));
  // m_{k+1} = k m_{k-1}
  for (int k = 1; k < 8; ++k) {
    CHECK(gaussian_half_moment(k + 1) == doctest::Approx(k * gaussian_half_moment(k - 1)));
  }
  CHECK(gaussian_half_moment(5) / gaussian_half_moment(3) == doctest::Approx(4.0));
  CHECK(gaussian_half_moment(7) / gaussian_half_moment(3) == doctest::Approx(24.0));
}

TEST_CASE("bessel J0 reference values") {
  CHECK(bessel_j0(0.0) == doctest::Approx(1.0));
  CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-12));
  CHECK(bessel_j0(2.404825557695773) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(bessel_j0(5.0) == doctest::Approx(-0.17759677131433830).epsilon(1e-12));
  CHECK(bessel_j0(20.0) == doctest::Approx(0.16702466434058315).epsilon(1e-11));
  // Bessel equation residual x y'' + y' + x y = 0 via central differences.
  for (double x : {1.3, 6.0, 15.0}) {
    const double h = 1e-5;
    const double y0 = bessel_j0(x - h), y1 = bessel_j0(x), y2 = bessel_j0(x + h);
    const double dy = (y2 - y0) / (2 * h), d2y = (y2 - 2 * y1 + y0) / (h * h);
    CHECK(x * d2y + dy + x * y1 == doctest::Approx(0.0).epsilon(1e-4));
  }
}

TEST_CASE("counter rng is pure and Gaussian-ish") {
  CHECK(rng::draw(1, 2, 3) == rng::draw(1, 2, 3));
  CHECK(rng::draw(1, 2, 3) != rng::draw(1, 2, 4));
  CHECK(rng::draw(1, 2, 3) != rng::draw(1, 3, 3));
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = rng::gaussian(9, 0, i);
    s += g;
    s2 += g * g;
  }
  CHECK(s / n == doctest::Approx(0.0).epsilon(0.01));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
}
