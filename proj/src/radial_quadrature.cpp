#include "rwm/radial_quadrature.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "rwm/analytic_kernels.hpp"
#include "rwm/gauss.hpp"

namespace rwm {

namespace {

constexpr int kGaussOrder = 48;
constexpr int kMaxCells = 6144;
constexpr int kTailSumTerms = 100000;

int kernel_decay_order(RadialKernel k) {
  switch (k) {
    case RadialKernel::sinc:
    case RadialKernel::dsinc:
    case RadialKernel::kernel_a:
      // A(u) = sinc'(u)/u - sinc''(u) ~ sin(u)/u at infinity: order 1.
      return 1;
    case RadialKernel::kernel_b:
      return 2;
  }
  return 0;
}

const char* kernel_name(RadialKernel k) {
  switch (k) {
    case RadialKernel::sinc: return "sinc";
    case RadialKernel::dsinc: return "dsinc";
    case RadialKernel::kernel_a: return "A";
    case RadialKernel::kernel_b: return "B";
  }
  return "?";
}

double kernel_value(RadialKernel k, const KernelValue& kv) {
  switch (k) {
    case RadialKernel::sinc: return kv.r;
    case RadialKernel::dsinc: return kv.r1;
    case RadialKernel::kernel_a: return kv.A;
    case RadialKernel::kernel_b: return kv.B;
  }
  return 0.0;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// Integral of the full integrand (factors times rho^weight) over
// [2 pi n, 2 pi (n+1)] by 48-point Gauss-Legendre.
double cell_integral(const RadialKernelSpec& spec, int n) {
  const QuadRule& gl = gauss_legendre(kGaussOrder);
  const double a = 2.0 * M_PI * n;
  const double half = M_PI;  // half-width of the cell
  const double mid = a + half;
  double sum = 0.0;
  for (int i = 0; i < kGaussOrder; ++i) {
    const double rho = mid + half * gl.nodes[i];
    sum += gl.weights[i] * spec.eval_factors(rho) * ipow(rho, spec.weight_exponent);
  }
  return sum * half;
}

// Fit S_n ~ sum_j c_j / (n+1/2)^(d+j), j = 0..3, through four sampled cell
// sums, and return sum_{n >= from} of the fitted model.
double tail_fit(const std::vector<double>& cells, int from, int degree) {
  const std::array<int, 4> sample = {from - 13, from - 9, from - 5, from - 1};
  long double M[4][5];
  for (int r = 0; r < 4; ++r) {
    const long double x = sample[r] + 0.5L;
    for (int j = 0; j < 4; ++j) M[r][j] = std::pow(x, (long double)(-(degree + j)));
    M[r][4] = cells[sample[r]];
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs((double)M[r][col]) > std::abs((double)M[piv][col])) piv = r;
    }
    for (int j = 0; j < 5; ++j) std::swap(M[col][j], M[piv][j]);
    for (int r = col + 1; r < 4; ++r) {
      const long double f = M[r][col] / M[col][col];
      for (int j = col; j < 5; ++j) M[r][j] -= f * M[col][j];
    }
  }
  long double c[4];
  for (int r = 3; r >= 0; --r) {
    long double s = M[r][4];
    for (int j = r + 1; j < 4; ++j) s -= M[r][j] * c[j];
    c[r] = s / M[r][r];
  }
  // Sum the model over the tail: explicit terms plus integral remainder.
  long double tail = 0.0L;
  for (int j = 0; j < 4; ++j) {
    const long double s = degree + j;
    long double part = 0.0L;
    for (int n = from; n < from + kTailSumTerms; ++n) {
      part += std::pow((long double)n + 0.5L, -s);
    }
    const long double M0 = from + kTailSumTerms - 0.5L;  // midpoint continuation
    part += std::pow(M0, 1.0L - s) / (s - 1.0L);
    tail += c[j] * part;
  }
  return (double)tail;
}

}  // namespace

int RadialKernelSpec::decay_degree() const {
  int d = -weight_exponent;
  for (const auto& f : factors) d += f.power * kernel_decay_order(f.kernel);
  return d;
}

double RadialKernelSpec::eval_factors(double rho) const {
  const KernelValue kv = sinc_kernel(rho);
  double g = 1.0;
  for (const auto& f : factors) g *= ipow(kernel_value(f.kernel, kv), f.power);
  return g;
}

std::string RadialKernelSpec::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) os << "*";
    os << kernel_name(factors[i].kernel);
    if (factors[i].power != 1) os << "^" << factors[i].power;
  }
  if (factors.empty()) os << "1";
  if (weight_exponent != 0) os << "*rho^" << weight_exponent;
  return os.str();
}

IntegralResult radial_integral(const RadialKernelSpec& spec, double tolerance) {
  for (const auto& f : spec.factors) {
    if (f.power < 1) throw std::invalid_argument("radial_integral: factor power < 1");
  }
  if (tolerance <= 0) throw std::invalid_argument("radial_integral: tolerance <= 0");
  if (!spec.tail_convergent()) {
    throw std::invalid_argument("radial_integral: non-convergent spec " + spec.str());
  }
  const int degree = spec.decay_degree();

  std::vector<double> cells;
  std::vector<double> head_sums;  // head_sums[n] = sum of cells[0..n-1]
  head_sums.push_back(0.0);
  auto extend_to = [&](int n) {
    while ((int)cells.size() < n) {
      cells.push_back(cell_integral(spec, (int)cells.size()));
      head_sums.push_back(head_sums.back() + cells.back());
    }
  };
  auto estimate = [&](int n) {
    extend_to(n);
    return head_sums[n] + tail_fit(cells, n, degree);
  };

  double prev = estimate(32);
  for (int n = 64; n <= kMaxCells; n *= 2) {
    const double cur = estimate(n);
    const double err = std::abs(cur - prev) + 1e-15 * (1.0 + std::abs(cur));
    if (err <= tolerance) {
      return {cur, err, n};
    }
    prev = cur;
  }
  IntegralResult best{prev, std::abs(prev - estimate(kMaxCells / 2)), kMaxCells};
  throw ConvergenceError(best);
}

double ball_covariogram(double R, double rho) {
  if (R <= 0) throw std::domain_error("ball_covariogram: R <= 0");
  if (rho < 0 || rho > 2.0 * R) throw std::domain_error("ball_covariogram: rho outside [0, 2R]");
  const double t = rho / R;
  return (4.0 * M_PI / 3.0) * R * R * R *
         (1.0 - 0.75 * t + t * t * t / 16.0);
}

double overlap_integral(double R, const RadialKernelSpec& spec) {
  if (R <= 0) throw std::domain_error("overlap_integral: R <= 0");
  const QuadRule& gl = gauss_legendre(kGaussOrder);
  const double upper = 2.0 * R;
  const int ncells = std::max(1, (int)std::ceil(upper / M_PI));
  double total = 0.0;
  for (int c = 0; c < ncells; ++c) {
    const double a = std::min(upper, c * M_PI);
    const double b = std::min(upper, (c + 1) * M_PI);
    if (b <= a) break;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < kGaussOrder; ++i) {
      const double rho = mid + half * gl.nodes[i];
      sum += gl.weights[i] * spec.eval_factors(rho) * 4.0 * M_PI * rho * rho *
             ball_covariogram(R, rho);
    }
    total += sum * half;
  }
  return total;
}

double leading_order_constant(const RadialKernelSpec& spec) {
  RadialKernelSpec weighted = spec;
  weighted.weight_exponent = 2;
  return 4.0 * M_PI * radial_integral(weighted, 1e-10).value;
}

}  // namespace rwm
