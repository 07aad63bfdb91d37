#pragma once

#include "msvm/types.hpp"

#include <cstdint>
#include <vector>

namespace msvm {

namespace detail {

inline void check_dims(const Dataset& data, const Classifier& clf) {
  if (clf.W.rows() != data.p() || clf.W.cols() != data.num_classes ||
      clf.b.size() != data.num_classes)
    throw std::invalid_argument("classifier dimensions do not match dataset");
}

// n x J matrix of decision values f_j(x_i)
inline Matrix decision_scores(const Matrix& features, const Classifier& clf) {
  return (features.transpose() * clf.W).rowwise() + clf.b.transpose();
}

}  // namespace detail

// Averaged multiclass hinge: (1/n) sum_i sum_{j != y_i} [b_j + w_j^T x_i + 1]_+
inline double hinge_loss(const Dataset& data, const Classifier& clf) {
  detail::check_dims(data, clf);
  const CostMask cost(data);
  const Matrix margins = detail::decision_scores(data.features, clf).array() + 1.0;
  return (cost.c.array() * margins.array().max(0.0)).sum() / static_cast<double>(data.n());
}

inline double regularizer_value(const Matrix& w, RegularizerKind kind) {
  if (w.size() == 0) return 0.0;
  switch (kind) {
    case RegularizerKind::ElasticNet: return 0.5 * w.squaredNorm();
    case RegularizerKind::GroupLasso: return w.rowwise().norm().sum();
    case RegularizerKind::Supnorm: return w.cwiseAbs().rowwise().maxCoeff().sum();
  }
  throw std::invalid_argument("unknown regularizer kind");
}

// hinge + lambda1 ||W||_1 + lambda2 phi(W) + lambda3/2 ||b||^2
inline double objective(const Dataset& data, const Classifier& clf, const Hyperparams& hp,
                        RegularizerKind kind) {
  return hinge_loss(data, clf) + hp.lambda1 * clf.W.cwiseAbs().sum() +
         hp.lambda2 * regularizer_value(clf.W, kind) + 0.5 * hp.lambda3 * clf.b.squaredNorm();
}

// argmax_j f_j(x), ties to the smallest class index; returns a 1-based label.
inline int predict(const Classifier& clf, const Eigen::Ref<const Vector>& x) {
  if (x.size() != clf.W.rows())
    throw std::invalid_argument("sample dimension does not match classifier");
  const Vector scores = clf.W.transpose() * x + clf.b;
  int best = 0;
  for (int j = 1; j < scores.size(); ++j)
    if (scores[j] > scores[best]) best = j;
  return best + 1;
}

inline IntVector predict_all(const Classifier& clf, const Matrix& samples) {
  if (samples.rows() != clf.W.rows())
    throw std::invalid_argument("sample dimension does not match classifier");
  const Matrix scores = detail::decision_scores(samples, clf);
  IntVector out(samples.cols());
  for (Index i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (int j = 1; j < scores.cols(); ++j)
      if (scores(i, j) > scores(i, best)) best = j;
    out[i] = best + 1;
  }
  return out;
}

// fraction of samples whose predicted label matches
inline double accuracy(const Classifier& clf, const Dataset& data) {
  detail::check_dims(data, clf);
  const IntVector pred = predict_all(clf, data.features);
  Index hits = 0;
  for (Index i = 0; i < pred.size(); ++i)
    if (pred[i] == data.labels[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(data.n());
}

// Zero every entry with |w_ij| <= rel_tol * max |w|.
inline Matrix truncate(const Matrix& w, double rel_tol = 1e-3) {
  if (rel_tol < 0) throw std::invalid_argument("rel_tol must be nonnegative");
  if (w.size() == 0) return w;
  const double cutoff = rel_tol * w.cwiseAbs().maxCoeff();
  return (w.cwiseAbs().array() <= cutoff).select(0.0, w);
}

struct SparsityReport {
  std::int64_t correct_zeros = 0;    // zero entries the relevance mask marks irrelevant
  std::int64_t incorrect_zeros = 0;  // zero entries the mask marks relevant
  std::int64_t nonzero_rows = 0;
  std::vector<std::int64_t> nonzeros_per_column;
};

inline SparsityReport sparsity_metrics(const Matrix& w_trunc, const Matrix& relevance_mask) {
  if (w_trunc.rows() != relevance_mask.rows() || w_trunc.cols() != relevance_mask.cols())
    throw std::invalid_argument("weight/mask shapes do not match");
  SparsityReport report;
  report.nonzeros_per_column.assign(static_cast<std::size_t>(w_trunc.cols()), 0);
  for (Index i = 0; i < w_trunc.rows(); ++i) {
    bool row_has_nonzero = false;
    for (Index j = 0; j < w_trunc.cols(); ++j) {
      if (w_trunc(i, j) == 0.0) {
        if (relevance_mask(i, j) != 0.0)
          ++report.incorrect_zeros;
        else
          ++report.correct_zeros;
      } else {
        ++report.nonzeros_per_column[static_cast<std::size_t>(j)];
        row_has_nonzero = true;
      }
    }
    if (row_has_nonzero) ++report.nonzero_rows;
  }
  return report;
}

}  // namespace msvm
