#pragma once

#include "msvm/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace msvm {

// argmin_a nu [a]_+ + (a - delta)^2 / 2: one-sided shrinkage with a dead zone
// on [0, nu]; negative inputs pass through.
inline double hinge_prox(double delta, double nu) {
  if (nu < 0) throw std::invalid_argument("hinge_prox threshold must be nonnegative");
  if (delta < 0) return delta;
  return delta > nu ? delta - nu : 0.0;
}

// argmin_u nu |u| + (u - delta)^2 / 2: sign(delta) max(0, |delta| - nu)
inline double soft_threshold(double delta, double nu) {
  if (nu < 0) throw std::invalid_argument("soft_threshold threshold must be nonnegative");
  const double shrunk = std::abs(delta) - nu;
  if (shrunk <= 0) return 0.0;
  return delta > 0 ? shrunk : -shrunk;
}

// Entrywise hinge prox of m with per-entry threshold c_ij / (n alpha).
inline Matrix update_a(const Matrix& m, const CostMask& cost, double alpha) {
  if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
  if (m.rows() != cost.c.rows() || m.cols() != cost.c.cols())
    throw std::invalid_argument("update_a: shape mismatch with cost mask");
  const double n = static_cast<double>(m.rows());
  Matrix out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      out(i, j) = hinge_prox(m(i, j), cost.c(i, j) / (n * alpha));
  return out;
}

// argmin_v t ||v||_2 + ||v - z||^2 / 2: vanish when ||z||_2 <= t, otherwise
// scale z by (||z||_2 - t) / ||z||_2.
inline Vector group_row_shrink(const Vector& z, double t) {
  if (t < 0) throw std::invalid_argument("group_row_shrink threshold must be nonnegative");
  const double norm = z.norm();
  if (norm <= t) return Vector::Zero(z.size());
  return z * ((norm - t) / norm);
}

// argmin_w t ||w||_inf + ||w - v||^2 / 2. Clips |v_i| at the level tau where
// the mass shaved off the largest entries equals t; the whole row vanishes
// when ||v||_1 <= t.
inline Vector supnorm_row_prox(const Vector& v, double t) {
  if (t < 0) throw std::invalid_argument("supnorm_row_prox threshold must be nonnegative");
  if (t == 0.0) return v;
  if (v.cwiseAbs().sum() <= t) return Vector::Zero(v.size());
  std::vector<double> u(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) u[static_cast<std::size_t>(i)] = std::abs(v[i]);
  std::stable_sort(u.begin(), u.end(), std::greater<>());
  // largest r with t - sum_{s<=r} (u_s - u_r) > 0 (the set is a prefix, u is sorted)
  double cum = 0.0, cum_at_r_hat = 0.0;
  std::size_t r_hat = 0;
  for (std::size_t r = 0; r < u.size(); ++r) {
    cum += u[r];
    if (t - (cum - static_cast<double>(r + 1) * u[r]) > 0) {
      r_hat = r + 1;
      cum_at_r_hat = cum;
    }
  }
  const double tau = (cum_at_r_hat - t) / static_cast<double>(r_hat);
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double clipped = std::min(std::abs(v[i]), tau);
    out[i] = v[i] < 0 ? -clipped : clipped;
  }
  return out;
}

// Soft-threshold W + Lam / mu entrywise at lambda1 / mu.
inline Matrix update_u(const Matrix& w, const Matrix& lam, double lambda1, double mu) {
  if (mu <= 0) throw std::invalid_argument("mu must be positive");
  if (lambda1 < 0) throw std::invalid_argument("lambda1 must be nonnegative");
  if (w.rows() != lam.rows() || w.cols() != lam.cols())
    throw std::invalid_argument("update_u: shape mismatch");
  const Matrix z = w + lam / mu;
  const double threshold = lambda1 / mu;
  Matrix out(z.rows(), z.cols());
  for (Index j = 0; j < z.cols(); ++j)
    for (Index i = 0; i < z.rows(); ++i) out(i, j) = soft_threshold(z(i, j), threshold);
  return out;
}

// Rowwise prox of W + Gam / nu at lambda2 / nu: group shrink for the group
// lasso, sup-norm clipping for the supnorm model.
inline Matrix update_v(const Matrix& w, const Matrix& gam, double lambda2, double nu,
                       RegularizerKind kind) {
  if (nu <= 0) throw std::invalid_argument("nu must be positive");
  if (lambda2 < 0) throw std::invalid_argument("lambda2 must be nonnegative");
  if (kind == RegularizerKind::ElasticNet)
    throw std::invalid_argument("update_v applies to the group/sup models only");
  if (w.rows() != gam.rows() || w.cols() != gam.cols())
    throw std::invalid_argument("update_v: shape mismatch");
  const Matrix z = w + gam / nu;
  const double threshold = lambda2 / nu;
  Matrix out(z.rows(), z.cols());
  for (Index i = 0; i < z.rows(); ++i) {
    const Vector row = z.row(i).transpose();
    out.row(i) = (kind == RegularizerKind::GroupLasso ? group_row_shrink(row, threshold)
                                                      : supnorm_row_prox(row, threshold))
                     .transpose();
  }
  return out;
}

}  // namespace msvm
