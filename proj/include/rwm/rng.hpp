#pragma once

#include <cstdint>
#include <cmath>

namespace rwm {

/// Counter-based random numbers: every draw is a pure function of
/// (seed, stream, counter), so any partition of the work across threads
/// reproduces the same values bit for bit.
namespace rng {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t z = mix(seed + kGolden * (stream + 1));
  return mix(z ^ (counter * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull));
}

/// Uniform in (0, 1]; never returns 0 so it is safe under log().
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return (static_cast<double>(draw(seed, stream, counter) >> 11) + 1.0) * 0x1p-53;
}

/// One Box-Muller pair per counter value.
inline void gaussian_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                          double& g0, double& g1) {
  const double u = uniform(seed, 2 * stream, counter);
  const double v = uniform(seed, 2 * stream + 1, counter);
  const double r = std::sqrt(-2.0 * std::log(u));
  constexpr double two_pi = 6.283185307179586476925286766559;
  g0 = r * std::cos(two_pi * v);
  g1 = r * std::sin(two_pi * v);
}

inline double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  double g0, g1;
  gaussian_pair(seed, stream, counter / 2, g0, g1);
  return (counter & 1) ? g1 : g0;
}

}  // namespace rng
}  // namespace rwm
