#pragma once

#include "msvm/linear_system.hpp"
#include "msvm/model.hpp"
#include "msvm/prox.hpp"
#include "msvm/types.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace msvm {

struct SolverDivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Primal blocks and multipliers of one ADMM run, plus the running split
// objective. V and Gam stay empty for the elastic-net model.
struct SolverState {
  Matrix W, A, U, V, Pi, Lam, Gam;
  Vector b;
  int iterations = 0;
  double split_obj = 0.0;
  double prev_split_obj = 0.0;

  static SolverState origin(Index p, Index n, int num_classes, RegularizerKind kind) {
    SolverState s;
    s.W = Matrix::Zero(p, num_classes);
    s.b = Vector::Zero(num_classes);
    s.A = Matrix::Zero(n, num_classes);
    s.U = Matrix::Zero(p, num_classes);
    s.Pi = Matrix::Zero(n, num_classes);
    s.Lam = Matrix::Zero(p, num_classes);
    if (kind != RegularizerKind::ElasticNet) {
      s.V = Matrix::Zero(p, num_classes);
      s.Gam = Matrix::Zero(p, num_classes);
    }
    return s;
  }
};

struct Residuals {
  double primal_a = 0.0;        // ||X^T W + e b^T + E - A||_F / sqrt(nJ)
  double primal_u = 0.0;        // ||W - U||_F / sqrt(pJ)
  double primal_v = 0.0;        // ||W - V||_F / sqrt(pJ), 0 for elastic net
  double rel_obj_change = 0.0;  // |F_k - F_{k-1}| / (1 + F_{k-1})

  double max_term(RegularizerKind kind) const {
    double m = std::max({rel_obj_change, primal_a, primal_u});
    if (kind != RegularizerKind::ElasticNet) m = std::max(m, primal_v);
    return m;
  }
};

struct IterationRecord {
  int iteration = 0;
  double split_obj = 0.0;
  double r_a = 0.0, r_u = 0.0, r_v = 0.0;
  double rel_obj_change = 0.0;
};

struct FitReport {
  Classifier classifier;
  int iterations = 0;
  double split_obj = 0.0;  // split objective at exit
  Residuals final_residuals;
  bool converged = false;
  double wall_seconds = 0.0;
  std::vector<IterationRecord> history;
};

using ProgressCallback =
    std::function<void(int iteration, double f, double r_a, double r_u, double r_v)>;

// alpha = 50 J / n, mu = nu = sqrt(pJ), lambda3 = 1, tol 1e-5, maxit 5000.
// lambda1 and lambda2 are left to the caller.
inline Hyperparams default_hyperparams(Index n, Index p, int num_classes) {
  if (n < 1 || p < 1 || num_classes < 2)
    throw std::invalid_argument("default_hyperparams: need n, p >= 1 and J >= 2");
  Hyperparams hp;
  hp.alpha = 50.0 * static_cast<double>(num_classes) / static_cast<double>(n);
  hp.mu = hp.nu = std::sqrt(static_cast<double>(p) * static_cast<double>(num_classes));
  hp.lambda3 = 1.0;
  hp.tol = 1e-5;
  hp.maxit = 5000;
  return hp;
}

// Objective of the split problem at (W, b, A, U[, V]): hinge on A
// + lambda1 ||U||_1 + regularizer part + lambda3/2 ||b||^2. The elastic-net
// regularizer reads W directly; the q-norm models read the V block.
inline double split_objective(const SolverState& s, const CostMask& cost, const Hyperparams& hp,
                              RegularizerKind kind) {
  const double n = static_cast<double>(cost.c.rows());
  double value = (cost.c.array() * s.A.array().max(0.0)).sum() / n +
                 hp.lambda1 * s.U.cwiseAbs().sum() + 0.5 * hp.lambda3 * s.b.squaredNorm();
  if (kind == RegularizerKind::ElasticNet)
    value += 0.5 * hp.lambda2 * s.W.squaredNorm();
  else
    value += hp.lambda2 * regularizer_value(s.V, kind);
  return value;
}

// Minimizer of the augmented Lagrangian over (W, b) subject to the sum-to-zero
// constraints: assemble the right-hand side, solve the reduced normal
// equations, lift back. The factor must have been built with the diagonal
// matching the model (lambda2 + mu for elastic net, mu + nu otherwise).
inline std::pair<Matrix, Vector> update_wb(const SolverState& s, const SystemFactor& factor,
                                           const ReducedBasis& basis, const Hyperparams& hp,
                                           RegularizerKind kind, const Matrix& x) {
  const double expected_diag =
      kind == RegularizerKind::ElasticNet ? hp.lambda2 + hp.mu : hp.mu + hp.nu;
  if (factor.diag_top() != expected_diag || factor.alpha() != hp.alpha ||
      factor.lambda3() != hp.lambda3)
    throw std::invalid_argument("update_wb: factor parameters do not match the model");
  const Index p = x.rows();
  // Theta = alpha A - Pi - alpha E collects the A-block terms of the rhs.
  const Matrix theta = hp.alpha * (s.A.array() - 1.0).matrix() - s.Pi;
  Matrix stacked(p + 1, basis.num_classes);
  if (kind == RegularizerKind::ElasticNet)
    stacked.topRows(p) = x * theta - s.Lam + hp.mu * s.U;
  else
    stacked.topRows(p) = x * theta - s.Lam - s.Gam + hp.mu * s.U + hp.nu * s.V;
  stacked.row(p) = theta.colwise().sum();
  const Matrix solution = factor.solve(basis.reduce_columns(stacked));
  return basis.lift(solution.topRows(p), solution.row(p).transpose());
}

namespace detail {

inline Residuals residuals_from_scores(const SolverState& s, const Matrix& scores) {
  Residuals r;
  const double nj = static_cast<double>(s.A.rows()) * static_cast<double>(s.A.cols());
  const double pj = static_cast<double>(s.W.rows()) * static_cast<double>(s.W.cols());
  r.primal_a = ((scores.array() + 1.0) - s.A.array()).matrix().norm() / std::sqrt(nj);
  r.primal_u = (s.W - s.U).norm() / std::sqrt(pj);
  r.primal_v = s.V.size() ? (s.W - s.V).norm() / std::sqrt(pj) : 0.0;
  r.rel_obj_change = std::abs(s.split_obj - s.prev_split_obj) / (1.0 + s.prev_split_obj);
  return r;
}

inline bool state_finite(const SolverState& s) {
  return s.W.allFinite() && s.b.allFinite() && s.A.allFinite() && s.U.allFinite() &&
         s.Pi.allFinite() && s.Lam.allFinite() && (s.V.size() == 0 || s.V.allFinite()) &&
         (s.Gam.size() == 0 || s.Gam.allFinite());
}

}  // namespace detail

// Scaled feasibility gaps of the current iterate plus the relative change of
// the split objective held in the state.
inline Residuals residuals(const SolverState& s, const Matrix& x) {
  const Matrix scores = (x.transpose() * s.W).rowwise() + s.b.transpose();
  return detail::residuals_from_scores(s, scores);
}

// Gradient-ascent multiplier steps with the same alpha, mu, nu as the
// penalties. `scores` is X^T W + e b^T for the current W, b.
inline void update_multipliers(SolverState& s, const Matrix& scores, const Hyperparams& hp,
                               RegularizerKind kind) {
  s.Pi += hp.alpha * ((scores.array() + 1.0) - s.A.array()).matrix();
  s.Lam += hp.mu * (s.W - s.U);
  if (kind != RegularizerKind::ElasticNet) s.Gam += hp.nu * (s.W - s.V);
}

// Two-block ADMM: (W, b) by the cached linear solve, then the separable
// prox updates of (A, U[, V]), then the multiplier steps. Stops when the max
// of the relative objective change and the scaled primal residuals drops to
// tol, or after maxit iterations.
inline FitReport fit(const Dataset& data, const Hyperparams& hp, RegularizerKind kind,
                     const SolverState* initial = nullptr, const ProgressCallback& progress = {}) {
  data.validate();
  hp.validate();
  const Index p = data.p(), n = data.n();
  const int num_classes = data.num_classes;
  const Matrix& x = data.features;
  const ReducedBasis basis(num_classes);
  const CostMask cost(data);
  const double diag_top =
      kind == RegularizerKind::ElasticNet ? hp.lambda2 + hp.mu : hp.mu + hp.nu;
  const SystemFactor factor(x, hp.alpha, diag_top, hp.lambda3);
  const Matrix ones = Matrix::Ones(n, num_classes);

  SolverState state = initial ? *initial : SolverState::origin(p, n, num_classes, kind);
  if (state.W.rows() != p || state.W.cols() != num_classes || state.A.rows() != n)
    throw std::invalid_argument("fit: initial state dimensions do not match the dataset");
  if (kind != RegularizerKind::ElasticNet && state.V.size() == 0) {
    state.V = Matrix::Zero(p, num_classes);
    state.Gam = Matrix::Zero(p, num_classes);
  }
  state.split_obj = split_objective(state, cost, hp, kind);
  state.prev_split_obj = state.split_obj;

  FitReport report;
  report.history.reserve(static_cast<std::size_t>(std::min(hp.maxit, 10000)));
  const auto start = std::chrono::steady_clock::now();

  for (int k = 1; k <= hp.maxit; ++k) {
    auto [w, b] = update_wb(state, factor, basis, hp, kind, x);
    state.W = std::move(w);
    state.b = std::move(b);
    const Matrix scores = (x.transpose() * state.W).rowwise() + state.b.transpose();
    state.A = update_a(scores + state.Pi / hp.alpha + ones, cost, hp.alpha);
    state.U = update_u(state.W, state.Lam, hp.lambda1, hp.mu);
    if (kind != RegularizerKind::ElasticNet)
      state.V = update_v(state.W, state.Gam, hp.lambda2, hp.nu, kind);
    update_multipliers(state, scores, hp, kind);
    state.prev_split_obj = state.split_obj;
    state.split_obj = split_objective(state, cost, hp, kind);
    state.iterations = k;

    const Residuals res = detail::residuals_from_scores(state, scores);
    report.history.push_back(
        {k, state.split_obj, res.primal_a, res.primal_u, res.primal_v, res.rel_obj_change});
    if (progress) progress(k, state.split_obj, res.primal_a, res.primal_u, res.primal_v);
    if (k % 100 == 0 && !detail::state_finite(state))
      throw SolverDivergenceError("ADMM iterates became non-finite at iteration " +
                                  std::to_string(k));
    report.final_residuals = res;
    if (res.max_term(kind) <= hp.tol) {
      report.converged = true;
      break;
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.iterations = state.iterations;
  report.split_obj = state.split_obj;
  report.classifier = Classifier{state.W, state.b};
  return report;
}

}  // namespace msvm
