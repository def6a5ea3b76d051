#pragma once

#include <vector>

#include "rwm/rational.hpp"

namespace rwm {

/// A value of the form (num/den) * pi, kept exact.
struct PiRational {
  Rational coeff;  // multiple of pi
  double value() const;
  PiRational operator+(const PiRational& o) const { return {coeff + o.coeff}; }
  PiRational operator*(const Rational& q) const { return {coeff * q}; }
  bool operator==(const PiRational& o) const { return coeff == o.coeff; }
};

/// Integral over the unit sphere of u1^(2a) u2^(2b) u3^(2c); arguments are
/// the HALF exponents, so (1,0,0) is the integral of u1^2 (= 4pi/3) and
/// (2,0,0) the integral of u1^4 (= 4pi/5).
PiRational sphere_monomial_moment(int a, int b, int c);

/// A monomial in the components of the unit displacement, possibly summed
/// over a symbolic index pattern.  `exponents` holds one even exponent per
/// bound axis slot (0 means the axis is bound but absent from the monomial);
/// slot count must match the quantifier arity: up to 3 for `single` (axes
/// 1,2,3 in order), up to 1 for `sum_over_k`, exactly 2 for
/// `sum_over_distinct_pairs`, exactly 3 for `sum_over_distinct_triples`.
/// An empty list under `sum_over_k` sums the constant 1 over k (= 12pi).
struct AngularPattern {
  enum class Summation { single, sum_over_k, sum_over_distinct_pairs, sum_over_distinct_triples };
  Summation summation = Summation::single;
  std::vector<int> exponents;
};

/// The summed angular integral of the pattern (ordered index assignments).
PiRational angular_pattern_sum(const AngularPattern& pattern);

/// Numeric oracle for sphere_monomial_moment: product Gauss-Legendre in
/// cos(theta) x trapezoid in phi.  Same half-exponent convention.
double sphere_quadrature_moment(int a, int b, int c, int resolution);

}  // namespace rwm
