#include "rwm/sphere_moments.hpp"

#include <cmath>
#include <stdexcept>

#include "rwm/gauss.hpp"

namespace rwm {

double PiRational::value() const { return coeff.value() * M_PI; }

namespace {

std::int64_t odd_double_factorial(int n) {  // (2n-1)!! with (-1)!! = 1
  std::int64_t f = 1;
  for (int j = 3; j <= 2 * n - 1; j += 2) f *= j;
  return f;
}

void check_half_exponent(int a) {
  if (a < 0) throw std::invalid_argument("sphere moment: negative exponent");
  if (a > 15) throw std::invalid_argument("sphere moment: exponent too large");
}

}  // namespace

PiRational sphere_monomial_moment(int a, int b, int c) {
  check_half_exponent(a);
  check_half_exponent(b);
  check_half_exponent(c);
  const std::int64_t num =
      4 * odd_double_factorial(a) * odd_double_factorial(b) * odd_double_factorial(c);
  const std::int64_t den = odd_double_factorial(a + b + c + 1);  // (2(a+b+c)+1)!!
  return {Rational(num, den)};
}

PiRational angular_pattern_sum(const AngularPattern& pattern) {
  using S = AngularPattern::Summation;
  for (int e : pattern.exponents) {
    if (e < 0 || e % 2 != 0) {
      throw std::invalid_argument("angular pattern: exponents must be even and nonnegative");
    }
  }
  const std::size_t n = pattern.exponents.size();
  auto half = [&](std::size_t i) { return pattern.exponents[i] / 2; };
  switch (pattern.summation) {
    case S::single: {
      if (n > 3) throw std::invalid_argument("angular pattern: too many axes");
      int h[3] = {0, 0, 0};
      for (std::size_t i = 0; i < n; ++i) h[i] = half(i);
      return sphere_monomial_moment(h[0], h[1], h[2]);
    }
    case S::sum_over_k: {
      if (n > 1) throw std::invalid_argument("angular pattern: sum_over_k takes one slot");
      const int h = n == 1 ? half(0) : 0;
      return sphere_monomial_moment(h, 0, 0) * Rational(3);
    }
    case S::sum_over_distinct_pairs: {
      if (n != 2) throw std::invalid_argument("angular pattern: pairs take two slots");
      // 6 ordered assignments of {i,j} to distinct axes; the moment is
      // permutation symmetric, so each contributes the same value.
      return sphere_monomial_moment(half(0), half(1), 0) * Rational(6);
    }
    case S::sum_over_distinct_triples: {
      if (n != 3) throw std::invalid_argument("angular pattern: triples take three slots");
      return sphere_monomial_moment(half(0), half(1), half(2)) * Rational(6);
    }
  }
  throw std::logic_error("angular pattern: bad summation tag");
}

double sphere_quadrature_moment(int a, int b, int c, int resolution) {
  check_half_exponent(a);
  check_half_exponent(b);
  check_half_exponent(c);
  if (resolution < 8) throw std::invalid_argument("sphere quadrature: resolution < 8");
  const QuadRule& gl = gauss_legendre(resolution);
  const int nphi = 2 * resolution;
  double total = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double ct = gl.nodes[i];  // cos(theta)
    const double st2 = 1.0 - ct * ct;
    const double st = std::sqrt(st2);
    double ring = 0.0;
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * M_PI * j / nphi;
      const double u1 = st * std::cos(phi);
      const double u2 = st * std::sin(phi);
      ring += std::pow(u1 * u1, a) * std::pow(u2 * u2, b);
    }
    total += gl.weights[i] * std::pow(ct * ct, c) * ring * (2.0 * M_PI / nphi);
  }
  return total;
}

}  // namespace rwm
