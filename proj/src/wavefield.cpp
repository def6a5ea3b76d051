#include "rwm/wavefield.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

#include "rwm/analytic_kernels.hpp"
#include "rwm/chaos_coefficients.hpp"
#include "rwm/rng.hpp"

#include "json.hpp"

namespace rwm {

namespace {

std::array<double, 3> sphere_direction(std::uint64_t seed, std::uint64_t stream,
                                       std::uint64_t n) {
  // Normalized Gaussian triple; retry with shifted counters on a (measure
  // zero) tiny norm.
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t base = n + attempt * 0x100000000ull;
    double g0, g1, g2, g3;
    rng::gaussian_pair(seed, stream, 2 * base + 0, g0, g1);
    rng::gaussian_pair(seed, stream, 2 * base + 1, g2, g3);
    const double norm = std::sqrt(g0 * g0 + g1 * g1 + g2 * g2);
    if (norm > 1e-8) return {g0 / norm, g1 / norm, g2 / norm};
  }
}

PlaneWaveEnsemble sample_one(int dim, int n_waves, std::uint64_t seed,
                             std::uint64_t dir_stream, std::uint64_t phase_stream) {
  PlaneWaveEnsemble e;
  e.dim = dim;
  e.seed = seed;
  e.amplitude = std::sqrt(2.0 / n_waves);
  e.directions.resize(n_waves);
  e.phases.resize(n_waves);
  for (int n = 0; n < n_waves; ++n) {
    if (dim == 3) {
      e.directions[n] = sphere_direction(seed, dir_stream, n);
    } else {
      const double theta = 2.0 * M_PI * rng::uniform(seed, dir_stream, n);
      e.directions[n] = {std::cos(theta), std::sin(theta), 0.0};
    }
    e.phases[n] = 2.0 * M_PI * rng::uniform(seed, phase_stream, n);
  }
  return e;
}

}  // namespace

std::pair<PlaneWaveEnsemble, PlaneWaveEnsemble> sample_ensemble(
    int dim, int n_waves, std::uint64_t seed, std::uint64_t stream_base) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("sample_ensemble: dim must be 2 or 3");
  if (n_waves < 1) throw std::invalid_argument("sample_ensemble: n_waves < 1");
  const std::uint64_t b = 4 * stream_base;
  return {sample_one(dim, n_waves, seed, b + 0, b + 1),
          sample_one(dim, n_waves, seed, b + 2, b + 3)};
}

std::pair<double, std::array<double, 3>> eval_field_and_gradient(
    const PlaneWaveEnsemble& e, const std::array<double, 3>& x) {
  double value = 0.0;
  std::array<double, 3> grad{0.0, 0.0, 0.0};
  for (std::size_t n = 0; n < e.directions.size(); ++n) {
    const auto& u = e.directions[n];
    const double arg = u[0] * x[0] + u[1] * x[1] + u[2] * x[2] + e.phases[n];
    const double c = std::cos(arg);
    const double s = std::sin(arg);
    value += c;
    for (int k = 0; k < 3; ++k) grad[k] -= s * u[k];
  }
  value *= e.amplitude;
  for (int k = 0; k < 3; ++k) grad[k] *= e.amplitude;
  return {value, grad};
}

GridSpec make_ball_grid(int dim, double R, double h) {
  if (R <= 0 || h <= 0) throw std::invalid_argument("make_ball_grid: R and h must be positive");
  GridSpec s;
  s.h = h;
  const double lo = -(R + h);
  const int n = (int)std::ceil(2.0 * (R + h) / h) + 1;
  for (int k = 0; k < 3; ++k) {
    s.origin[k] = lo;
    s.extents[k] = n;
  }
  if (dim == 2) {
    s.origin[2] = 0.0;
    s.extents[2] = 1;
  }
  return s;
}

namespace {

void check_spec(const GridSpec& spec) {
  if (spec.h <= 0) throw std::invalid_argument("evaluate_grid: spacing must be positive");
  for (int k = 0; k < 3; ++k) {
    if (spec.extents[k] < 1) throw std::invalid_argument("evaluate_grid: empty grid");
  }
}

FieldGrid empty_grid(int dim, const GridSpec& spec) {
  FieldGrid g;
  g.dim = dim;
  g.origin = spec.origin;
  g.h = spec.h;
  g.extents = spec.extents;
  const std::size_t n = g.n_nodes();
  g.xi.assign(n, 0.0);
  g.eta.assign(n, 0.0);
  g.grad_xi.assign(n, {0.0, 0.0, 0.0});
  g.grad_eta.assign(n, {0.0, 0.0, 0.0});
  return g;
}

// Fills value/grad arrays for one ensemble.  Each wave contributes
// Re / Im of ax[i] * ay[j] * az[k] where the per-axis factors are
// exp(i u_c * x_c) (phase folded into ax); nodes are processed in
// parallel, each summing its waves in index order, so the output does not
// depend on the thread count.
void synthesize(const PlaneWaveEnsemble& e, const GridSpec& spec,
                std::vector<double>& value, std::vector<std::array<double, 3>>& grad) {
  using cd = std::complex<double>;
  const int nx = spec.extents[0], ny = spec.extents[1], nz = spec.extents[2];
  const std::size_t nw = e.directions.size();
  std::vector<cd> ax(nw * nx), ay(nw * ny), az(nw * nz);
  for (std::size_t n = 0; n < nw; ++n) {
    const auto& u = e.directions[n];
    for (int i = 0; i < nx; ++i) {
      ax[n * nx + i] = std::polar(1.0, u[0] * (spec.origin[0] + spec.h * i) + e.phases[n]);
    }
    for (int j = 0; j < ny; ++j) {
      ay[n * ny + j] = std::polar(1.0, u[1] * (spec.origin[1] + spec.h * j));
    }
    for (int k = 0; k < nz; ++k) {
      az[n * nz + k] = std::polar(1.0, u[2] * (spec.origin[2] + spec.h * k));
    }
  }
  const double amp = e.amplitude;
#pragma omp parallel for schedule(static) collapse(2)
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t idx = (std::size_t(k) * ny + j) * nx + i;
        double v = 0.0;
        std::array<double, 3> gr{0.0, 0.0, 0.0};
        for (std::size_t n = 0; n < nw; ++n) {
          const cd c = ax[n * nx + i] * ay[n * ny + j] * az[n * nz + k];
          v += c.real();
          const double s = c.imag();
          const auto& u = e.directions[n];
          gr[0] -= s * u[0];
          gr[1] -= s * u[1];
          gr[2] -= s * u[2];
        }
        value[idx] = amp * v;
        for (int c = 0; c < 3; ++c) grad[idx][c] = amp * gr[c];
      }
    }
  }
}

}  // namespace

FieldGrid evaluate_grid(const PlaneWaveEnsemble& xi, const PlaneWaveEnsemble& eta,
                        const GridSpec& spec) {
  check_spec(spec);
  if (xi.dim != eta.dim) throw std::invalid_argument("evaluate_grid: mixed dimensions");
  FieldGrid g = empty_grid(xi.dim, spec);
  synthesize(xi, spec, g.xi, g.grad_xi);
  synthesize(eta, spec, g.eta, g.grad_eta);
  return g;
}

FieldGrid evaluate_grid_serial(const PlaneWaveEnsemble& xi, const PlaneWaveEnsemble& eta,
                               const GridSpec& spec) {
  check_spec(spec);
  if (xi.dim != eta.dim) throw std::invalid_argument("evaluate_grid_serial: mixed dimensions");
  FieldGrid g = empty_grid(xi.dim, spec);
  for (int k = 0; k < spec.extents[2]; ++k) {
    for (int j = 0; j < spec.extents[1]; ++j) {
      for (int i = 0; i < spec.extents[0]; ++i) {
        const std::size_t idx = g.index(i, j, k);
        const auto x = g.node(i, j, k);
        auto [v1, g1] = eval_field_and_gradient(xi, x);
        auto [v2, g2] = eval_field_and_gradient(eta, x);
        g.xi[idx] = v1;
        g.grad_xi[idx] = g1;
        g.eta[idx] = v2;
        g.grad_eta[idx] = g2;
      }
    }
  }
  return g;
}

ExactGaussianSampler::ExactGaussianSampler(std::vector<std::array<double, 3>> points, int dim)
    : points_(std::move(points)), dim_(dim), n_(points_.size()) {
  if (dim_ != 2 && dim_ != 3) throw std::invalid_argument("ExactGaussianSampler: dim must be 2 or 3");
  if (n_ == 0 || n_ > 2000) throw std::invalid_argument("ExactGaussianSampler: point count out of range");
  std::vector<double> cov(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double dx = points_[i][0] - points_[j][0];
      const double dy = points_[i][1] - points_[j][1];
      const double dz = points_[i][2] - points_[j][2];
      const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
      const double c = dim_ == 3 ? sinc_kernel(d).r : bessel_j0(d);
      cov[i * n_ + j] = cov[j * n_ + i] = c;
    }
  }
  // Cholesky with a jitter ladder on the diagonal.
  for (double jitter : {0.0, 1e-12, 1e-10, 1e-8}) {
    chol_.assign(cov.begin(), cov.end());
    for (std::size_t i = 0; i < n_; ++i) chol_[i * n_ + i] += jitter;
    bool ok = true;
    for (std::size_t i = 0; i < n_ && ok; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = chol_[i * n_ + j];
        for (std::size_t k = 0; k < j; ++k) s -= chol_[i * n_ + k] * chol_[j * n_ + k];
        if (i == j) {
          if (s <= 0.0) {
            ok = false;
            break;
          }
          chol_[i * n_ + i] = std::sqrt(s);
        } else {
          chol_[i * n_ + j] = s / chol_[j * n_ + j];
        }
      }
    }
    if (ok) {
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) chol_[i * n_ + j] = 0.0;
      }
      return;
    }
  }
  throw std::runtime_error("ExactGaussianSampler: covariance not positive definite after jitter");
}

std::pair<std::vector<double>, std::vector<double>> ExactGaussianSampler::sample(
    std::uint64_t seed, std::uint64_t replicate) const {
  std::vector<double> z1(n_), z2(n_), xi(n_, 0.0), eta(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    z1[i] = rng::gaussian(seed, 2 * replicate + 0, i);
    z2[i] = rng::gaussian(seed, 2 * replicate + 1, i);
  }
  for (std::size_t i = 0; i < n_; ++i) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j <= i; ++j) {
      s1 += chol_[i * n_ + j] * z1[j];
      s2 += chol_[i * n_ + j] * z2[j];
    }
    xi[i] = s1;
    eta[i] = s2;
  }
  return {std::move(xi), std::move(eta)};
}

std::pair<std::vector<double>, std::vector<double>> exact_gaussian_sample(
    const std::vector<std::array<double, 3>>& points, int dim, std::uint64_t seed) {
  return ExactGaussianSampler(points, dim).sample(seed);
}

namespace {

// Multi-indices in N^8 with nonzero c coefficient at order 2q.
std::vector<HermiteIndex> chaos_indices(int q) {
  std::vector<HermiteIndex> out;
  auto add = [&](std::vector<int> a) { out.push_back(HermiteIndex{std::move(a)}); };
  if (q == 1) {
    add({2, 0, 0, 0, 0, 0, 0, 0});
    add({0, 2, 0, 0, 0, 0, 0, 0});
    for (int k = 0; k < 6; ++k) {
      std::vector<int> a(8, 0);
      a[2 + k] = 2;
      add(a);
    }
  } else if (q == 2) {
    add({4, 0, 0, 0, 0, 0, 0, 0});
    add({0, 4, 0, 0, 0, 0, 0, 0});
    add({2, 2, 0, 0, 0, 0, 0, 0});
    for (int lead = 0; lead < 2; ++lead) {
      for (int k = 0; k < 6; ++k) {
        std::vector<int> a(8, 0);
        a[lead] = 2;
        a[2 + k] = 2;
        add(a);
      }
    }
    for (int k = 0; k < 6; ++k) {
      std::vector<int> a(8, 0);
      a[2 + k] = 4;
      add(a);
    }
    for (int i = 0; i < 6; ++i) {
      for (int j = i + 1; j < 6; ++j) {
        std::vector<int> a(8, 0);
        a[2 + i] = 2;
        a[2 + j] = 2;
        add(a);
      }
    }
  } else {
    throw std::invalid_argument("chaos_projection: q must be 1 or 2");
  }
  return out;
}

}  // namespace

double chaos_projection(const FieldGrid& grid, int q, double R) {
  if (grid.dim != 3) throw std::invalid_argument("chaos_projection: 3D grids only");
  if (R <= 0) throw std::invalid_argument("chaos_projection: R must be positive");
  for (int k = 0; k < 3; ++k) {
    const double lo = grid.origin[k];
    const double hi = grid.origin[k] + grid.h * (grid.extents[k] - 1);
    if (lo > -R || hi < R) throw std::domain_error("chaos_projection: grid does not cover the ball");
  }
  const auto indices = chaos_indices(q);
  std::vector<double> coeffs;
  coeffs.reserve(indices.size());
  // The exact coefficients, not the published ones: with the exact values the
  // second-chaos integrand is a divergence (Helmholtz), which is what makes
  // Var(I_2)/vol decay.  The published values break that cancellation.
  for (const auto& a : indices) coeffs.push_back(c_coefficient_exact(a));

  const double sqrt3 = std::sqrt(3.0);
  const int nx = grid.extents[0], ny = grid.extents[1], nz = grid.extents[2];
  double total = 0.0;
#pragma omp parallel for schedule(static) collapse(2) reduction(+ : total)
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const auto x = grid.node(i, j, k);
        if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] > R * R) continue;
        const std::size_t idx = grid.index(i, j, k);
        const std::array<double, 8> y = {
            grid.xi[idx],              grid.eta[idx],
            sqrt3 * grid.grad_xi[idx][0],  sqrt3 * grid.grad_xi[idx][1],
            sqrt3 * grid.grad_xi[idx][2],  sqrt3 * grid.grad_eta[idx][0],
            sqrt3 * grid.grad_eta[idx][1], sqrt3 * grid.grad_eta[idx][2]};
        double node_sum = 0.0;
        for (std::size_t t = 0; t < indices.size(); ++t) {
          node_sum += coeffs[t] * multi_hermite(indices[t], y);
        }
        total += node_sum;
      }
    }
  }
  return total * grid.h * grid.h * grid.h;
}

void write_field_grid(const FieldGrid& grid, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("write_field_grid: cannot open " + path);
  auto dump = [&](const double* p, std::size_t n) {
    if (std::fwrite(p, sizeof(double), n, f) != n) {
      std::fclose(f);
      throw std::runtime_error("write_field_grid: short write to " + path);
    }
  };
  const std::size_t n = grid.n_nodes();
  dump(grid.xi.data(), n);
  dump(grid.eta.data(), n);
  for (const auto& g : grid.grad_xi) dump(g.data(), 3);
  for (const auto& g : grid.grad_eta) dump(g.data(), 3);
  std::fclose(f);

  nlohmann::json j;
  j["dim"] = grid.dim;
  j["origin"] = {grid.origin[0], grid.origin[1], grid.origin[2]};
  j["spacing"] = grid.h;
  j["extents"] = {grid.extents[0], grid.extents[1], grid.extents[2]};
  j["layout"] = "xi[n], eta[n], grad_xi[n][3], grad_eta[n][3]; little-endian float64; "
                "flat index (k*ny + j)*nx + i";
  std::FILE* s = std::fopen((path + ".json").c_str(), "wb");
  if (!s) throw std::runtime_error("write_field_grid: cannot open sidecar for " + path);
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), s);
  std::fclose(s);
}

}  // namespace rwm
