#pragma once

#include <array>
#include <string>
#include <vector>

#include "rwm/radial_quadrature.hpp"
#include "rwm/rational.hpp"
#include "rwm/sphere_moments.hpp"

namespace rwm {

/// Covariance of the field and its first derivatives at a displacement:
/// r, grad_x = (r_k0), grad_y = (r_0k) = -grad_x, hess = (r_kk').
struct KernelDerivatives {
  double r = 0.0;
  std::array<double, 3> grad_x{};
  std::array<double, 3> grad_y{};
  std::array<std::array<double, 3>, 3> hess{};
};

KernelDerivatives kernel_derivatives(const std::array<double, 3>& displacement);

/// One summand of a variance/covariance block.  Several terms may share a
/// label; the block value is the sum over its label.  Values are reported
/// in units of (4 pi^3 R^3 / 3) for Var(2 pi I4):
///   value = coefficient * (radial integral) * (angular sum) / pi^2.
struct ChaosTerm {
  std::string label;
  Rational coefficient;
  RadialKernelSpec radial;
  AngularPattern angular;
  bool sign_known_nonnegative = false;
};

/// The complete list of non-vanishing fourth-chaos variance/covariance
/// summands, one symmetry-class representative per label (the assembly
/// applies the symmetry multiplicities).
std::vector<ChaosTerm> i4_term_catalog();

/// Leading constant of a single summand, in (4 pi^3 R^3 / 3) units.
double evaluate_term(const ChaosTerm& term, double tolerance);

/// Sum of all catalog summands sharing the label.
double evaluate_label(const std::vector<ChaosTerm>& catalog, const std::string& label,
                      double tolerance);

struct LedgerEntry {
  std::string label;
  double value = 0.0;        // pipeline value
  double paper_value = 0.0;  // published reference constant (if any)
  bool has_reference = false;
  bool open_question = false;  // mismatch expected and documented
  std::string flag;            // "ok" | "mismatch" | "n/a"
  std::string note;
};

struct LedgerReport {
  std::vector<LedgerEntry> terms;      // per label
  std::vector<LedgerEntry> subtotals;  // per block, bound (negative) parts
  /// Lower bound for Var(2 pi I4) in (4 pi^3 R^3 / 3) units.
  double assembled_bound = 0.0;
  /// The same bound converted to Var(I4) >= c * vol: c = assembled / (2pi)^2
  /// * pi^2 = assembled / 4.  This is the single place the 2 pi
  /// normalization is divided out.
  double var_i4_per_volume = 0.0;
  double reference_bound = 0.0;  // published counterpart of var_i4_per_volume
  bool positive = false;
  std::string to_json() const;
};

LedgerReport assemble_lower_bound(double tolerance);

/// Expected nodal length per unit volume: 1/(3 pi).
double expected_length_density();

}  // namespace rwm
