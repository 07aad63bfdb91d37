#pragma once

#include "msvm/types.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace msvm {

struct FeatureScaler {
  Vector mean;
  Vector stddev;  // 0 marks a degenerate (constant) feature
  std::vector<Index> zero_variance;
};

inline FeatureScaler fit_scaler(const Dataset& data) {
  if (data.n() < 2) throw std::invalid_argument("standardization needs at least two samples");
  FeatureScaler scaler;
  scaler.mean = data.features.rowwise().mean();
  const Matrix centered = data.features.colwise() - scaler.mean;
  scaler.stddev =
      (centered.rowwise().squaredNorm() / static_cast<double>(data.n() - 1)).cwiseSqrt();
  for (Index g = 0; g < data.p(); ++g) {
    if (scaler.stddev[g] <= 1e-12 * std::max(1.0, std::abs(scaler.mean[g]))) {
      scaler.zero_variance.push_back(g);
      scaler.stddev[g] = 0.0;
    }
  }
  return scaler;
}

// Degenerate features become all-zero rows rather than dividing by zero.
inline Dataset apply_scaler(const Dataset& data, const FeatureScaler& scaler) {
  if (scaler.mean.size() != data.p() || scaler.stddev.size() != data.p())
    throw std::invalid_argument("scaler dimension does not match dataset");
  Matrix x = data.features.colwise() - scaler.mean;
  for (Index g = 0; g < data.p(); ++g) {
    if (scaler.stddev[g] == 0.0)
      x.row(g).setZero();
    else
      x.row(g) /= scaler.stddev[g];
  }
  return Dataset(std::move(x), data.labels, data.num_classes);
}

// Center and scale every feature row to mean 0 and sample standard deviation 1
// using the dataset's own statistics. Indices of zero-variance features are
// reported through `zero_variance` when given.
inline Dataset standardize(const Dataset& data, std::vector<Index>* zero_variance = nullptr) {
  const FeatureScaler scaler = fit_scaler(data);
  if (zero_variance) *zero_variance = scaler.zero_variance;
  return apply_scaler(data, scaler);
}

// Between-class to within-class sum-of-squares ratio per feature; higher means
// more relevant. A feature that is constant within every class but varies
// across classes scores +inf; a feature constant everywhere scores 0.
inline Vector gene_rank(const Dataset& data) {
  const Index p = data.p(), n = data.n();
  const int num_classes = data.num_classes;
  if (n < num_classes + 1) throw std::invalid_argument("gene_rank needs n >= J + 1");
  std::vector<Index> class_count(static_cast<std::size_t>(num_classes), 0);
  for (Index i = 0; i < n; ++i) ++class_count[static_cast<std::size_t>(data.labels[i] - 1)];
  for (int j = 0; j < num_classes; ++j)
    if (class_count[static_cast<std::size_t>(j)] == 0)
      throw std::invalid_argument("gene_rank: class " + std::to_string(j + 1) + " has no samples");

  Vector scores(p);
  std::vector<double> class_mean(static_cast<std::size_t>(num_classes));
  for (Index g = 0; g < p; ++g) {
    const double shift = data.features(g, 0);  // conditioning: sums of small deviations
    double overall = 0.0;
    std::fill(class_mean.begin(), class_mean.end(), 0.0);
    for (Index i = 0; i < n; ++i) {
      const double v = data.features(g, i) - shift;
      overall += v;
      class_mean[static_cast<std::size_t>(data.labels[i] - 1)] += v;
    }
    overall /= static_cast<double>(n);
    for (int j = 0; j < num_classes; ++j)
      class_mean[static_cast<std::size_t>(j)] /=
          static_cast<double>(class_count[static_cast<std::size_t>(j)]);
    double between = 0.0, within = 0.0;
    for (int j = 0; j < num_classes; ++j) {
      const double d = class_mean[static_cast<std::size_t>(j)] - overall;
      between += static_cast<double>(class_count[static_cast<std::size_t>(j)]) * d * d;
    }
    for (Index i = 0; i < n; ++i) {
      const double d =
          (data.features(g, i) - shift) - class_mean[static_cast<std::size_t>(data.labels[i] - 1)];
      within += d * d;
    }
    if (between + within == 0.0)
      scores[g] = 0.0;
    else if (within <= 1e-12 * (between + within))
      scores[g] = std::numeric_limits<double>::infinity();
    else
      scores[g] = between / within;
  }
  return scores;
}

// Indices (0-based) of the k largest scores, ties to the smaller index,
// returned in ascending index order.
inline std::vector<Index> select_top_k(const Vector& scores, Index k) {
  if (k < 1 || k > scores.size()) throw std::invalid_argument("select_top_k: k out of range");
  std::vector<Index> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return scores[a] > scores[b]; });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

inline Dataset select_features(const Dataset& data, const std::vector<Index>& rows) {
  if (rows.empty()) throw std::invalid_argument("select_features: empty row selection");
  Matrix x(static_cast<Index>(rows.size()), data.n());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= data.p())
      throw std::invalid_argument("select_features: row index out of range");
    x.row(static_cast<Index>(r)) = data.features.row(rows[r]);
  }
  return Dataset(std::move(x), data.labels, data.num_classes);
}

inline Dataset subset_samples(const Dataset& data, const std::vector<Index>& columns) {
  if (columns.empty()) throw std::invalid_argument("subset_samples: empty selection");
  Matrix x(data.p(), static_cast<Index>(columns.size()));
  IntVector labels(static_cast<Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] < 0 || columns[c] >= data.n())
      throw std::invalid_argument("subset_samples: sample index out of range");
    x.col(static_cast<Index>(c)) = data.features.col(columns[c]);
    labels[static_cast<Index>(c)] = data.labels[columns[c]];
  }
  return Dataset(std::move(x), std::move(labels), data.num_classes);
}

}  // namespace msvm
