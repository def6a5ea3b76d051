#include <cmath>

#include "doctest.h"
#include "rwm/sphere_moments.hpp"

using namespace rwm;
using S = AngularPattern::Summation;

TEST_CASE("monomial moments: closed forms") {
  CHECK(sphere_monomial_moment(0, 0, 0) == PiRational{{4, 1}});
  CHECK(sphere_monomial_moment(1, 0, 0) == PiRational{{4, 3}});
  CHECK(sphere_monomial_moment(2, 0, 0) == PiRational{{4, 5}});
  CHECK(sphere_monomial_moment(1, 1, 0) == PiRational{{4, 15}});
  CHECK(sphere_monomial_moment(2, 1, 0) == PiRational{{4, 35}});
  CHECK(sphere_monomial_moment(2, 2, 0) == PiRational{{12, 315}});
  CHECK(sphere_monomial_moment(1, 1, 1) == PiRational{{4, 105}});
  CHECK(sphere_monomial_moment(4, 0, 0) == PiRational{{4, 9}});
  CHECK_THROWS(sphere_monomial_moment(-1, 0, 0));
}

TEST_CASE("monomial moments agree with quadrature") {
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; b + a <= 4; ++b) {
      for (int c = 0; c + b + a <= 4; ++c) {
        const double exact = sphere_monomial_moment(a, b, c).value();
        CHECK(std::abs(sphere_quadrature_moment(a, b, c, 48) - exact) <= 1e-9);
      }
    }
  }
}

TEST_CASE("pattern sums: the angular constant table") {
  CHECK(angular_pattern_sum({S::sum_over_k, {4}}) == PiRational{{12, 5}});
  CHECK(angular_pattern_sum({S::sum_over_k, {8}}) == PiRational{{12, 9}});
  CHECK(angular_pattern_sum({S::sum_over_k, {6}}) == PiRational{{12, 7}});
  CHECK(angular_pattern_sum({S::sum_over_k, {2}}) == PiRational{{4, 1}});
  CHECK(angular_pattern_sum({S::sum_over_distinct_pairs, {4, 4}}) == PiRational{{24, 105}});
  CHECK(angular_pattern_sum({S::sum_over_distinct_pairs, {6, 2}}) == PiRational{{8, 21}});
  CHECK(angular_pattern_sum({S::sum_over_distinct_pairs, {4, 2}}) == PiRational{{24, 35}});
  CHECK(angular_pattern_sum({S::sum_over_distinct_pairs, {2, 2}}) == PiRational{{8, 5}});
  CHECK(angular_pattern_sum({S::sum_over_distinct_pairs, {0, 2}}) == PiRational{{8, 1}});
  CHECK(angular_pattern_sum({S::sum_over_distinct_triples, {4, 2, 2}}) == PiRational{{24, 315}});
  CHECK(angular_pattern_sum({S::sum_over_distinct_triples, {2, 2, 2}}) == PiRational{{8, 35}});
}

TEST_CASE("pattern multiplicities") {
  // sum over k of a constant = 3 * 4 pi; empty exponent list allowed there.
  CHECK(angular_pattern_sum({S::sum_over_k, {}}) == PiRational{{12, 1}});
  CHECK(angular_pattern_sum({S::sum_over_k, {0}}) == PiRational{{12, 1}});
  // single with explicit axes: integral of u1^2 u2^2.
  CHECK(angular_pattern_sum({S::single, {2, 2}}) == PiRational{{4, 15}});
  CHECK(angular_pattern_sum({S::single, {}}) == PiRational{{4, 1}});
  // ordered pairs: 6 assignments of u_i^2 u_j^2, i != j.
  CHECK(angular_pattern_sum({S::sum_over_distinct_pairs, {2, 2}}).coeff ==
        Rational{6, 1} * sphere_monomial_moment(1, 1, 0).coeff);
  CHECK(angular_pattern_sum({S::sum_over_distinct_triples, {2, 2, 2}}).coeff ==
        Rational{6, 1} * sphere_monomial_moment(1, 1, 1).coeff);
}

TEST_CASE("odd exponents are rejected") {
  CHECK_THROWS(angular_pattern_sum({S::sum_over_k, {3}}));
  CHECK_THROWS(angular_pattern_sum({S::sum_over_distinct_pairs, {2, 1}}));
  CHECK_THROWS(angular_pattern_sum({S::single, {1}}));
}

TEST_CASE("arity violations are rejected") {
  CHECK_THROWS(angular_pattern_sum({S::sum_over_k, {2, 2}}));
  CHECK_THROWS(angular_pattern_sum({S::sum_over_distinct_pairs, {2}}));
  CHECK_THROWS(angular_pattern_sum({S::sum_over_distinct_triples, {2, 2}}));
}
