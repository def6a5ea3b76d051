#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rwm/analytic_kernels.hpp"

namespace rwm {

/// Standardized gradient surrogates (z1, z2) ~ the scaled gradients of the
/// two field components at a point.
struct GradientPair {
  std::array<double, 3> z1{};
  std::array<double, 3> z2{};
};

struct CoefficientEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// |z1 x z2| (area of the parallelogram; the codimension-2 Jacobian).
double det_perp(const GradientPair& p);

/// Closed-form Hermite coefficients of det_perp over N^6, derived from the
/// Gaussian half-moment ratios.  Supported families: 0, 2e_k,
/// 2e_i + 2e_j (i != j), 4e_k; anything else throws (never a silent 0).
double a_coefficient(const HermiteIndex& alpha);

/// Exact Hermite coefficients of det_perp over the same families, evaluated
/// through the polar factorization of the two gradient vectors.  Unlike
/// a_coefficient this distinguishes the three pair sub-cases (both order-2
/// slots within one vector, across vectors on the same axis, across vectors
/// on different axes).  These disagree with the half-moment-ratio values; the
/// sampled truth sides with this function (see mc_a_coefficient tests).
double a_coefficient_exact(const HermiteIndex& alpha);

/// Monte Carlo estimate of the same coefficient:
/// mean of det_perp(Z) * H_alpha(Z) / alpha! over n standard Gaussian
/// 6-vectors.  Bit-reproducible for fixed (seed, n) across thread counts.
CoefficientEstimate mc_a_coefficient(const HermiteIndex& alpha, std::int64_t n,
                                     std::uint64_t seed);

/// c_alpha = b_{alpha_1} b_{alpha_2} a_{(alpha_3..alpha_8)} over N^8.
double c_coefficient(const HermiteIndex& alpha);

/// Same product with the exact a coefficients.
double c_coefficient_exact(const HermiteIndex& alpha);

/// Closed-form moments E[prod H_{p_i}(X_i)] for jointly standard Gaussian
/// X with correlation matrix `corr` (flat row-major n x n).  Supported
/// order patterns: (p, q); (2,2,2,2) and (1,1,1,1), both requiring
/// E[X1 X2] = E[X3 X4] = 0; (2,2,4) with the order-4 variable last.
double hermite_product_moment(const std::vector<int>& orders,
                              const std::vector<double>& corr);

}  // namespace rwm
