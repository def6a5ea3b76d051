#include "rwm/chaos_coefficients.hpp"

#include <cmath>
#include <stdexcept>

#include "rwm/rng.hpp"

namespace rwm {

namespace {

// Classification of a supported N^6 multi-index.
enum class AFamily { zero, two_ek, two_ei_two_ej, four_ek, unsupported };

AFamily classify(const HermiteIndex& alpha) {
  if (alpha.size() != 6) return AFamily::unsupported;
  int n2 = 0, n4 = 0, other = 0;
  for (int v : alpha.alpha) {
    if (v == 0) continue;
    if (v == 2) ++n2;
    else if (v == 4) ++n4;
    else ++other;
  }
  if (other) return AFamily::unsupported;
  if (n2 == 0 && n4 == 0) return AFamily::zero;
  if (n2 == 1 && n4 == 0) return AFamily::two_ek;
  if (n2 == 2 && n4 == 0) return AFamily::two_ei_two_ej;
  if (n2 == 0 && n4 == 1) return AFamily::four_ek;
  return AFamily::unsupported;
}

}  // namespace

double det_perp(const GradientPair& p) {
  const auto& a = p.z1;
  const auto& b = p.z2;
  const double c0 = a[1] * b[2] - a[2] * b[1];
  const double c1 = a[2] * b[0] - a[0] * b[2];
  const double c2 = a[0] * b[1] - a[1] * b[0];
  return std::sqrt(c0 * c0 + c1 * c1 + c2 * c2);
}

double a_coefficient(const HermiteIndex& alpha) {
  const double a0 = 1.0;
  const double r53 = gaussian_half_moment(5) / gaussian_half_moment(3);
  const double r73 = gaussian_half_moment(7) / gaussian_half_moment(3);
  switch (classify(alpha)) {
    case AFamily::zero:
      return a0;
    case AFamily::two_ek:
      return (r53 / 3.0 - 1.0) * a0;
    case AFamily::two_ei_two_ej:
      return (r53 * r53 / 9.0 - 2.0 / 3.0 - 1.0) * a0;
    case AFamily::four_ek:
      return (r73 / 3.0 - 2.0 * r53 * r53 / 9.0 - 2.0 * r53 + 3.0) * a0;
    case AFamily::unsupported:
      break;
  }
  throw std::domain_error("a_coefficient: unsupported multi-index family");
}

double a_coefficient_exact(const HermiteIndex& alpha) {
  // Evaluated through the polar factorization z = r u (chi-distributed radius
  // times an independent uniform direction), which makes every coefficient an
  // explicit one-dimensional trig integral.  The pair family splits by where
  // the two order-2 slots sit: slots 0..2 belong to the first gradient, slots
  // 3..5 to the second.
  switch (classify(alpha)) {
    case AFamily::zero:
      return 2.0;
    case AFamily::two_ek:
      return 1.0 / 3.0;
    case AFamily::four_ek:
      return -1.0 / 60.0;
    case AFamily::two_ei_two_ej: {
      int i = -1, j = -1;
      for (int k = 0; k < 6; ++k) {
        if (alpha.alpha[k] == 2) (i < 0 ? i : j) = k;
      }
      if ((i < 3) == (j < 3)) return -1.0 / 30.0;  // both slots in one vector
      return j - i == 3 ? -1.0 / 30.0 : 1.0 / 10.0;  // across: same / crossed axes
    }
    case AFamily::unsupported:
      break;
  }
  throw std::domain_error("a_coefficient_exact: unsupported multi-index family");
}

CoefficientEstimate mc_a_coefficient(const HermiteIndex& alpha, std::int64_t n,
                                     std::uint64_t seed) {
  if (alpha.size() != 6) throw std::invalid_argument("mc_a_coefficient: index not in N^6");
  if (alpha.order() % 2 != 0) throw std::invalid_argument("mc_a_coefficient: odd order");
  if (n < 10000) throw std::invalid_argument("mc_a_coefficient: n too small");

  const double inv_fact = 1.0 / alpha.factorial();
  constexpr std::int64_t kBlock = 1 << 14;
  const std::int64_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> bsum(nblocks, 0.0), bsumsq(nblocks, 0.0);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t lo = b * kBlock;
    const std::int64_t hi = std::min(n, lo + kBlock);
    double s = 0.0, s2 = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      double z[6];
      rng::gaussian_pair(seed, 3 * (std::uint64_t)i + 0, 0, z[0], z[1]);
      rng::gaussian_pair(seed, 3 * (std::uint64_t)i + 1, 0, z[2], z[3]);
      rng::gaussian_pair(seed, 3 * (std::uint64_t)i + 2, 0, z[4], z[5]);
      GradientPair p{{z[0], z[1], z[2]}, {z[3], z[4], z[5]}};
      const double v = det_perp(p) * multi_hermite(alpha, z) * inv_fact;
      s += v;
      s2 += v * v;
    }
    bsum[b] = s;
    bsumsq[b] = s2;
  }
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t b = 0; b < nblocks; ++b) {  // ordered, deterministic
    sum += bsum[b];
    sumsq += bsumsq[b];
  }
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  return {mean, std::sqrt(var / n), n, seed};
}

double c_coefficient(const HermiteIndex& alpha) {
  if (alpha.size() != 8) throw std::invalid_argument("c_coefficient: index not in N^8");
  if (alpha.order() > 4) throw std::invalid_argument("c_coefficient: order > 4 unsupported");
  const HermiteIndex tail(std::vector<int>(alpha.alpha.begin() + 2, alpha.alpha.end()));
  const double b1 = delta_coefficient(alpha.alpha[0]);
  const double b2 = delta_coefficient(alpha.alpha[1]);
  if (b1 == 0.0 || b2 == 0.0) return 0.0;  // odd entries kill the product
  return b1 * b2 * a_coefficient(tail);
}

double c_coefficient_exact(const HermiteIndex& alpha) {
  if (alpha.size() != 8) throw std::invalid_argument("c_coefficient_exact: index not in N^8");
  if (alpha.order() > 4) throw std::invalid_argument("c_coefficient_exact: order > 4 unsupported");
  const HermiteIndex tail(std::vector<int>(alpha.alpha.begin() + 2, alpha.alpha.end()));
  const double b1 = delta_coefficient(alpha.alpha[0]);
  const double b2 = delta_coefficient(alpha.alpha[1]);
  if (b1 == 0.0 || b2 == 0.0) return 0.0;  // odd entries kill the product
  return b1 * b2 * a_coefficient_exact(tail);
}

double hermite_product_moment(const std::vector<int>& orders,
                              const std::vector<double>& corr) {
  const std::size_t m = orders.size();
  if (corr.size() != m * m) throw std::invalid_argument("hermite_product_moment: bad matrix size");
  auto rho = [&](int i, int j) { return corr[i * m + j]; };
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(rho(i, i) - 1.0) > 1e-12) {
      throw std::invalid_argument("hermite_product_moment: diagonal must be 1");
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (std::abs(rho(i, j) - rho(j, i)) > 1e-12 || std::abs(rho(i, j)) > 1.0 + 1e-12) {
        throw std::invalid_argument("hermite_product_moment: invalid correlation matrix");
      }
    }
  }
  if (m == 2) {
    if (orders[0] != orders[1]) return 0.0;
    double fact = 1.0, rp = 1.0;
    for (int j = 1; j <= orders[0]; ++j) {
      fact *= j;
      rp *= rho(0, 1);
    }
    return fact * rp;
  }
  if (m == 3 && orders[0] == 2 && orders[1] == 2 && orders[2] == 4) {
    const double r13 = rho(0, 2), r23 = rho(1, 2);
    return 24.0 * r13 * r13 * r23 * r23;
  }
  if (m == 4 && (std::abs(rho(0, 1)) > 1e-12 || std::abs(rho(2, 3)) > 1e-12)) {
    throw std::domain_error("hermite_product_moment: pattern requires E[X1X2] = E[X3X4] = 0");
  }
  if (m == 4 && orders == std::vector<int>{2, 2, 2, 2}) {
    const double r13 = rho(0, 2), r14 = rho(0, 3), r23 = rho(1, 2), r24 = rho(1, 3);
    return 4.0 * r13 * r13 * r24 * r24 + 4.0 * r14 * r14 * r23 * r23 +
           16.0 * r13 * r14 * r23 * r24;
  }
  if (m == 4 && orders == std::vector<int>{1, 1, 1, 1}) {
    return rho(0, 2) * rho(1, 3) + rho(0, 3) * rho(1, 2);
  }
  throw std::domain_error("hermite_product_moment: unsupported order pattern");
}

}  // namespace rwm
