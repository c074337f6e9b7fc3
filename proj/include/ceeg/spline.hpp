#pragma once

// Spherical-spline scalp interpolation (Perrin et al. style). The spline
// kernel is
//   g(x) = (1/4pi) * sum_{n=1}^{N} (2n+1) / (n^m (n+1)^m) * P_n(x)
// with x the cosine of the angle between electrode positions. Bad channels
// are estimated from the good ones by solving the regularized spline system
// with a constant term:
//   [ G + lambda*I  1 ] [ c  ]   [ v ]
//   [ 1^T           0 ] [ c0 ] = [ 0 ]
// and evaluating c0 + sum_i c_i g(cos theta_bi) at each bad position.

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "ceeg/errors.hpp"
#include "ceeg/matrix.hpp"
#include "ceeg/montage.hpp"
#include "ceeg/session.hpp"

namespace ceeg {

struct SplineConfig {
  int stiffness_m = 4;
  int n_legendre_terms = 50;
  double regularization = 1e-5;
};

inline void validate_spline_config(const SplineConfig& c) {
  if (c.stiffness_m < 2) fail(ErrorKind::invalid_argument, "spline stiffness m must be >= 2");
  if (c.n_legendre_terms < 7) fail(ErrorKind::invalid_argument, "spline needs >= 7 Legendre terms");
  if (c.regularization < 0) fail(ErrorKind::invalid_argument, "spline regularization must be >= 0");
}

/// Legendre-series spline kernel g(cos theta).
inline double spline_g(double x, const SplineConfig& config) {
  double p_prev = 1.0;  // P_0
  double p = x;         // P_1
  double sum = 0.0;
  for (int n = 1; n <= config.n_legendre_terms; ++n) {
    const double dn = n;
    sum += (2.0 * dn + 1.0) / std::pow(dn * (dn + 1.0), config.stiffness_m) * p;
    const double p_next = ((2.0 * dn + 1.0) * x * p - dn * p_prev) / (dn + 1.0);
    p_prev = p;
    p = p_next;
  }
  return sum / (4.0 * std::numbers::pi);
}

namespace detail {

/// Solves A X = B with partial-pivot Gaussian elimination; A is n x n, B is
/// n x k, both overwritten. Returns the solution in B.
inline void lu_solve_inplace(Matrix& a, Matrix& b) {
  const std::size_t n = a.rows;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-300)
      fail(ErrorKind::invalid_argument, "spline system is singular");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
      for (std::size_t c = 0; c < b.cols; ++c) std::swap(b(col, c), b(piv, c));
    }
    const double inv = 1.0 / a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) * inv;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      for (std::size_t c = 0; c < b.cols; ++c) b(r, c) -= f * b(col, c);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    const double inv = 1.0 / a(col, col);
    for (std::size_t c = 0; c < b.cols; ++c) {
      double v = b(col, c);
      for (std::size_t k = col + 1; k < n; ++k) v -= a(col, k) * b(k, c);
      b(col, c) = v * inv;
    }
  }
}

inline double dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace detail

/// Linear map M (n_bad x n_good) such that v_bad = M * v_good under the
/// spherical spline model.
inline Matrix spline_interpolation_matrix(const std::vector<Vec3>& good,
                                          const std::vector<Vec3>& bad,
                                          const SplineConfig& config) {
  validate_spline_config(config);
  const std::size_t g = good.size();
  if (g < 4) fail(ErrorKind::invalid_argument, "spline needs at least 4 good electrodes");

  // Bordered system matrix A, (g+1) x (g+1).
  Matrix a(g + 1, g + 1, 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j)
      a(i, j) = spline_g(detail::dot3(good[i], good[j]), config);
    a(i, i) += config.regularization;
    a(i, g) = 1.0;
    a(g, i) = 1.0;
  }

  // Z = A^{-1} [I; 0], shape (g+1) x g.
  Matrix z(g + 1, g, 0.0);
  for (std::size_t i = 0; i < g; ++i) z(i, i) = 1.0;
  detail::lu_solve_inplace(a, z);

  // M = [G_bg | 1] Z.
  Matrix m(bad.size(), g, 0.0);
  for (std::size_t b = 0; b < bad.size(); ++b) {
    std::vector<double> e(g + 1);
    for (std::size_t j = 0; j < g; ++j)
      e[j] = spline_g(detail::dot3(bad[b], good[j]), config);
    e[g] = 1.0;
    for (std::size_t c = 0; c < g; ++c) {
      double v = 0.0;
      for (std::size_t k = 0; k <= g; ++k) v += e[k] * z(k, c);
      m(b, c) = v;
    }
  }
  return m;
}

/// Replaces each bad channel in every trial by its spherical-spline estimate
/// from the good channels. Good channels come through bitwise unchanged.
inline Session interpolate_bads(const Session& session, const Montage& montage,
                                const std::set<std::size_t>& bads,
                                const SplineConfig& config = {}) {
  if (bads.empty()) return session;
  const std::size_t n_channels = session.meta.n_channels();
  for (std::size_t b : bads)
    if (b >= n_channels)
      fail(ErrorKind::invalid_argument, "bad channel index out of range");
  if (n_channels - bads.size() < 4)
    fail(ErrorKind::invalid_argument,
         "too few good channels for spline interpolation (need >= 4)");

  std::vector<std::size_t> good_idx, bad_idx;
  std::vector<Vec3> good_pos, bad_pos;
  for (std::size_t c = 0; c < n_channels; ++c) {
    const Vec3& p = montage.position(session.meta.channel_names[c]);
    if (bads.count(c)) {
      bad_idx.push_back(c);
      bad_pos.push_back(p);
    } else {
      good_idx.push_back(c);
      good_pos.push_back(p);
    }
  }
  const Matrix m = spline_interpolation_matrix(good_pos, bad_pos, config);

  Session out = session;
  for (auto& trial : out.trials) {
    const std::size_t n = trial.n_samples();
    // Only bad rows are rewritten; the good rows they read from are untouched.
    for (std::size_t bi = 0; bi < bad_idx.size(); ++bi) {
      auto dst = trial.samples.row(bad_idx[bi]);
      for (std::size_t t = 0; t < n; ++t) {
        double v = 0.0;
        for (std::size_t gi = 0; gi < good_idx.size(); ++gi)
          v += m(bi, gi) * trial.samples(good_idx[gi], t);
        dst[t] = v;
      }
    }
  }
  return out;
}

}  // namespace ceeg
