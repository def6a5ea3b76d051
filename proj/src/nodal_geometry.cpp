#include "rwm/nodal_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace rwm {

namespace {

using Vec3 = std::array<double, 3>;

double dist(const Vec3& p, const Vec3& q) {
  const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Clips segment [p, q] to the ball |x| <= R; returns false if nothing
// remains.  Exact quadratic in the segment parameter.
bool clip_to_ball(Vec3& p, Vec3& q, double R) {
  const Vec3 d = {q[0] - p[0], q[1] - p[1], q[2] - p[2]};
  const double a = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
  const double b = 2.0 * (p[0] * d[0] + p[1] * d[1] + p[2] * d[2]);
  const double c = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - R * R;
  double t0 = 0.0, t1 = 1.0;
  if (a < 1e-30) return c <= 0.0;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return false;  // line misses the ball entirely
  const double sq = std::sqrt(disc);
  t0 = std::max(t0, (-b - sq) / (2.0 * a));
  t1 = std::min(t1, (-b + sq) / (2.0 * a));
  if (t1 <= t0) return false;
  const Vec3 p0 = p;
  for (int k = 0; k < 3; ++k) {
    p[k] = p0[k] + t0 * d[k];
    q[k] = p0[k] + t1 * d[k];
  }
  return true;
}

// The six Kuhn tetrahedra of the unit cube: every tetrahedron walks from
// (0,0,0) to (1,1,1) along a permutation of the axes.
struct Tet {
  std::array<std::array<int, 3>, 4> offsets;
};

std::array<Tet, 6> kuhn_tets() {
  std::array<Tet, 6> tets;
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int t = 0; t < 6; ++t) {
    std::array<int, 3> v = {0, 0, 0};
    tets[t].offsets[0] = v;
    for (int s = 0; s < 3; ++s) {
      v[perms[t][s]] = 1;
      tets[t].offsets[s + 1] = v;
    }
  }
  return tets;
}

// 3x3 determinant.
double det3(const double m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Intersection of the linear zero sets of both fields with a tetrahedron.
// Returns 0, 1 or 2 endpoints through `out`; sets `degenerate` when the
// two linear gradients are parallel or a field vanishes identically.
int tet_zero_segment(const std::array<Vec3, 4>& P, const std::array<double, 4>& a,
                     const std::array<double, 4>& b, Vec3 out[2], bool& degenerate) {
  degenerate = false;
  double amax = 0.0, bmax = 0.0;
  for (int i = 0; i < 4; ++i) {
    amax = std::max(amax, std::abs(a[i]));
    bmax = std::max(bmax, std::abs(b[i]));
  }
  if (amax < 1e-12 || bmax < 1e-12) {
    degenerate = true;
    return 0;
  }
  // Gradients of the linear models: solve E g = da with edge matrix E.
  double E[3][3], gxi[3], geta[3];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) E[r][c] = P[r + 1][c] - P[0][c];
  }
  const double dE = det3(E);
  auto solve = [&](const double rhs[3], double g[3]) {
    double M[3][3];
    for (int c = 0; c < 3; ++c) {
      for (int r = 0; r < 3; ++r) {
        for (int cc = 0; cc < 3; ++cc) M[r][cc] = E[r][cc];
        M[r][c] = rhs[r];
      }
      g[c] = det3(M) / dE;
    }
  };
  const double da[3] = {a[1] - a[0], a[2] - a[0], a[3] - a[0]};
  const double db[3] = {b[1] - b[0], b[2] - b[0], b[3] - b[0]};
  solve(da, gxi);
  solve(db, geta);
  const double cx = gxi[1] * geta[2] - gxi[2] * geta[1];
  const double cy = gxi[2] * geta[0] - gxi[0] * geta[2];
  const double cz = gxi[0] * geta[1] - gxi[1] * geta[0];
  if (cx * cx + cy * cy + cz * cz < 1e-24) {
    degenerate = true;
    return 0;
  }

  // On each face (one barycentric coordinate zero) the common zero is the
  // solution of a 3x3 system in the remaining barycentric coordinates.
  Vec3 pts[4];
  int npts = 0;
  for (int f = 0; f < 4; ++f) {
    int idx[3], m = 0;
    for (int i = 0; i < 4; ++i) {
      if (i != f) idx[m++] = i;
    }
    double M[3][3] = {{a[idx[0]], a[idx[1]], a[idx[2]]},
                      {b[idx[0]], b[idx[1]], b[idx[2]]},
                      {1.0, 1.0, 1.0}};
    const double dM = det3(M);
    if (std::abs(dM) < 1e-14 * amax * bmax) continue;
    double lam[3];
    for (int c = 0; c < 3; ++c) {
      double C[3][3];
      for (int r = 0; r < 3; ++r) {
        for (int cc = 0; cc < 3; ++cc) C[r][cc] = M[r][cc];
      }
      C[0][c] = 0.0;
      C[1][c] = 0.0;
      C[2][c] = 1.0;
      lam[c] = det3(C) / dM;
    }
    if (lam[0] < -1e-9 || lam[1] < -1e-9 || lam[2] < -1e-9) continue;
    Vec3 p = {0, 0, 0};
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k < 3; ++k) p[k] += lam[c] * P[idx[c]][k];
    }
    if (npts < 4) pts[npts++] = p;
  }
  if (npts < 2) return 0;
  // A vertex touch can yield more than two (nearly coincident) points:
  // keep the farthest pair.
  int bi = 0, bj = 1;
  double best = -1.0;
  for (int i = 0; i < npts; ++i) {
    for (int j = i + 1; j < npts; ++j) {
      const double d = dist(pts[i], pts[j]);
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  }
  if (best < 1e-14) return 0;
  out[0] = pts[bi];
  out[1] = pts[bj];
  return 2;
}

}  // namespace

NodalCurve extract_nodal_curve_3d(const FieldGrid& grid, double R) {
  if (grid.dim != 3) throw std::invalid_argument("extract_nodal_curve_3d: 3D grid required");
  if (R <= 0) throw std::invalid_argument("extract_nodal_curve_3d: R must be positive");
  const int nx = grid.extents[0], ny = grid.extents[1], nz = grid.extents[2];
  const auto tets = kuhn_tets();

  const int nslabs = nz - 1;
  std::vector<std::vector<NodalCurve::Segment>> slab_segments(std::max(nslabs, 0));
  std::vector<std::int64_t> slab_degenerate(std::max(nslabs, 0), 0);
  std::vector<std::int64_t> slab_cells(std::max(nslabs, 0), 0);

#pragma omp parallel for schedule(static)
  for (int k = 0; k < nslabs; ++k) {
    auto& segs = slab_segments[k];
    for (int j = 0; j + 1 < ny; ++j) {
      for (int i = 0; i + 1 < nx; ++i) {
        // Nearest point of the cell to the origin: skip cells clear of
        // the ball.
        const Vec3 lo = grid.node(i, j, k);
        double nearest2 = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double a = lo[c], b = lo[c] + grid.h;
          const double n = (a > 0) ? a : (b < 0 ? -b : 0.0);
          nearest2 += n * n;
        }
        if (nearest2 > R * R) continue;
        ++slab_cells[k];

        Vec3 corner[2][2][2];
        double xv[2][2][2], ev[2][2][2];
        bool sign_change_xi = false, sign_change_eta = false;
        for (int dk = 0; dk < 2; ++dk) {
          for (int dj = 0; dj < 2; ++dj) {
            for (int di = 0; di < 2; ++di) {
              corner[di][dj][dk] = grid.node(i + di, j + dj, k + dk);
              const std::size_t idx = grid.index(i + di, j + dj, k + dk);
              xv[di][dj][dk] = grid.xi[idx];
              ev[di][dj][dk] = grid.eta[idx];
            }
          }
        }
        for (int c = 1; c < 8; ++c) {  // exact zeros count as positive
          if ((xv[c & 1][(c >> 1) & 1][c >> 2] >= 0) != (xv[0][0][0] >= 0)) sign_change_xi = true;
          if ((ev[c & 1][(c >> 1) & 1][c >> 2] >= 0) != (ev[0][0][0] >= 0)) sign_change_eta = true;
        }
        if (!sign_change_xi || !sign_change_eta) continue;

        for (const auto& tet : tets) {
          std::array<Vec3, 4> P;
          std::array<double, 4> a, b;
          for (int v = 0; v < 4; ++v) {
            const auto& o = tet.offsets[v];
            P[v] = corner[o[0]][o[1]][o[2]];
            a[v] = xv[o[0]][o[1]][o[2]];
            b[v] = ev[o[0]][o[1]][o[2]];
          }
          // Both fields must change sign on the tetrahedron (exact zeros
          // count as positive).
          auto straddles = [](const std::array<double, 4>& v) {
            bool neg = false, pos = false;
            for (double x : v) (x >= 0.0 ? pos : neg) = true;
            return neg && pos;
          };
          if (!straddles(a) || !straddles(b)) continue;
          Vec3 seg[2];
          bool degenerate = false;
          const int n = tet_zero_segment(P, a, b, seg, degenerate);
          if (degenerate) {
            ++slab_degenerate[k];
            continue;
          }
          if (n == 2 && clip_to_ball(seg[0], seg[1], R)) {
            segs.emplace_back(seg[0], seg[1]);
          }
        }
      }
    }
  }

  // Merge in slab order and drop duplicates: a zero segment lying exactly
  // on a shared face or edge is produced by every adjacent tetrahedron.
  NodalCurve curve;
  std::unordered_set<std::string> seen;
  auto key_of = [](const NodalCurve::Segment& s) {
    std::array<long long, 6> q;
    for (int c = 0; c < 3; ++c) {
      q[c] = llround(s.first[c] * 1e9);
      q[c + 3] = llround(s.second[c] * 1e9);
    }
    if (std::lexicographical_compare(q.begin() + 3, q.end(), q.begin(), q.begin() + 3)) {
      std::swap_ranges(q.begin(), q.begin() + 3, q.begin() + 3);
    }
    return std::string(reinterpret_cast<const char*>(q.data()), sizeof(q));
  };
  for (int k = 0; k < nslabs; ++k) {
    curve.degenerate_cells += slab_degenerate[k];
    curve.total_cells += slab_cells[k];
    for (const auto& s : slab_segments[k]) {
      if (!seen.insert(key_of(s)).second) continue;
      curve.segments.push_back(s);
      curve.total_length += dist(s.first, s.second);
    }
  }
  return curve;
}

namespace {

// Liang-Barsky style clip of a 2D segment to [-R, R]^2 (z untouched).
bool clip_to_square(Vec3& p, Vec3& q, double R) {
  double t0 = 0.0, t1 = 1.0;
  const double d[2] = {q[0] - p[0], q[1] - p[1]};
  for (int c = 0; c < 2; ++c) {
    for (int side = 0; side < 2; ++side) {
      const double den = side ? d[c] : -d[c];
      const double num = side ? (R - p[c]) : (p[c] + R);
      if (std::abs(den) < 1e-30) {
        if (num < 0) return false;
        continue;
      }
      const double t = num / den;
      if (den < 0) {
        t0 = std::max(t0, t);
      } else {
        t1 = std::min(t1, t);
      }
    }
  }
  if (t1 <= t0) return false;
  const Vec3 p0 = p;
  for (int k = 0; k < 2; ++k) {
    p[k] = p0[k] + t0 * d[k];
    q[k] = p0[k] + t1 * d[k];
  }
  return true;
}

}  // namespace

NodalCurve extract_nodal_lines_2d(const FieldGrid& grid, double R) {
  if (grid.dim != 2 || grid.extents[2] != 1) {
    throw std::invalid_argument("extract_nodal_lines_2d: 2D grid required");
  }
  if (R <= 0) throw std::invalid_argument("extract_nodal_lines_2d: R must be positive");
  const int nx = grid.extents[0], ny = grid.extents[1];
  NodalCurve curve;
  auto sgn = [](double v) { return v > 0.0; };  // exact zeros count as positive

  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const Vec3 p00 = grid.node(i, j, 0);
      if (p00[0] + grid.h < -R || p00[0] > R || p00[1] + grid.h < -R || p00[1] > R) continue;
      ++curve.total_cells;
      const double v00 = grid.xi[grid.index(i, j, 0)];
      const double v10 = grid.xi[grid.index(i + 1, j, 0)];
      const double v01 = grid.xi[grid.index(i, j + 1, 0)];
      const double v11 = grid.xi[grid.index(i + 1, j + 1, 0)];
      const double scale = std::max({std::abs(v00), std::abs(v10), std::abs(v01), std::abs(v11)});
      if (scale < 1e-12) {
        ++curve.degenerate_cells;
        continue;
      }
      const bool s00 = sgn(v00), s10 = sgn(v10), s01 = sgn(v01), s11 = sgn(v11);
      if (s00 == s10 && s10 == s01 && s01 == s11) continue;

      // Edge zero crossings by linear interpolation.
      auto lerp = [&](const Vec3& a, const Vec3& b, double va, double vb) {
        const double t = va / (va - vb);
        return Vec3{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), 0.0};
      };
      const Vec3 p10 = grid.node(i + 1, j, 0), p01 = grid.node(i, j + 1, 0),
                 p11 = grid.node(i + 1, j + 1, 0);
      Vec3 bottom, right, top, left;
      const bool eb = s00 != s10, er = s10 != s11, et = s01 != s11, el = s00 != s01;
      if (eb) bottom = lerp(p00, p10, v00, v10);
      if (er) right = lerp(p10, p11, v10, v11);
      if (et) top = lerp(p01, p11, v01, v11);
      if (el) left = lerp(p00, p01, v00, v01);

      std::vector<std::pair<Vec3, Vec3>> cell_segs;
      const int ncross = int(eb) + int(er) + int(et) + int(el);
      if (ncross == 2) {
        Vec3 pts[2];
        int m = 0;
        if (eb) pts[m++] = bottom;
        if (er && m < 2) pts[m++] = right;
        if (et && m < 2) pts[m++] = top;
        if (el && m < 2) pts[m++] = left;
        cell_segs.emplace_back(pts[0], pts[1]);
      } else if (ncross == 4) {
        // Saddle: pair the crossings by the sign of the bilinear center.
        const double center = 0.25 * (v00 + v10 + v01 + v11);
        if (sgn(center) == s00) {
          cell_segs.emplace_back(bottom, right);  // isolate the v10 corner
          cell_segs.emplace_back(left, top);      // isolate the v01 corner
        } else {
          cell_segs.emplace_back(bottom, left);
          cell_segs.emplace_back(right, top);
        }
      }
      for (auto& [p, q] : cell_segs) {
        if (clip_to_square(p, q, R)) {
          curve.segments.emplace_back(p, q);
          curve.total_length += dist(p, q);
        }
      }
    }
  }
  return curve;
}

double nodal_length_replicate(const ExperimentConfig& config, double R, std::uint64_t replicate) {
  auto [xi, eta] = sample_ensemble(config.dim, config.n_waves, config.seed, replicate);
  const GridSpec spec = make_ball_grid(config.dim, R, config.grid_spacing);
  const FieldGrid grid = evaluate_grid(xi, eta, spec);
  if (config.dim == 3) return extract_nodal_curve_3d(grid, R).total_length;
  return extract_nodal_lines_2d(grid, R).total_length;
}

NodalStatistics mc_nodal_statistics(const ExperimentConfig& config, double R) {
  config.validate();
  if (config.replicates < 2) {
    throw std::invalid_argument("mc_nodal_statistics: need at least 2 replicates");
  }
  const int n = config.replicates;
  std::vector<double> lengths(n);
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < n; ++r) {
    lengths[r] = nodal_length_replicate(config, R, (std::uint64_t)r);
  }
  double mean = 0.0;
  for (double v : lengths) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : lengths) {
    const double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double variance = m2 / (n - 1);
  m4 /= n;
  NodalStatistics st;
  st.R = R;
  st.n_replicates = n;
  st.mean_length = mean;
  st.variance = variance;
  st.stderr_mean = std::sqrt(variance / n);
  st.stderr_variance = std::sqrt(std::max(0.0, m4 - variance * variance) / n);
  return st;
}

void write_curve_obj(const NodalCurve& curve, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("write_curve_obj: cannot open " + path);
  for (const auto& [p, q] : curve.segments) {
    std::fprintf(f, "v %.17g %.17g %.17g\n", p[0], p[1], p[2]);
    std::fprintf(f, "v %.17g %.17g %.17g\n", q[0], q[1], q[2]);
  }
  for (std::size_t s = 0; s < curve.segments.size(); ++s) {
    std::fprintf(f, "l %zu %zu\n", 2 * s + 1, 2 * s + 2);
  }
  std::fclose(f);
}

}  // namespace rwm
