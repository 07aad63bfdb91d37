#pragma once

#include "msvm/model.hpp"
#include "msvm/preprocess.hpp"
#include "msvm/solver.hpp"
#include "msvm/types.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace msvm {

// Lambda search grid used throughout: {0, 0.001, 0.01..0.1 step 0.01, 0.15, 0.2, 0.25, 0.3}.
inline const std::vector<double>& default_lambda_grid() {
  static const std::vector<double> grid = {0.0,  0.001, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06,
                                           0.07, 0.08,  0.09, 0.10, 0.15, 0.20, 0.25, 0.30};
  return grid;
}

// Deal each class round-robin into `folds` buckets after a seeded shuffle, so
// every fold sees every class. Throws when a class has fewer members than folds.
inline std::vector<int> stratified_folds(const IntVector& labels, int num_classes, int folds,
                                         std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("need at least two folds");
  std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(num_classes));
  for (Index i = 0; i < labels.size(); ++i)
    by_class[static_cast<std::size_t>(labels[i] - 1)].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(static_cast<std::size_t>(labels.size()), 0);
  for (int j = 0; j < num_classes; ++j) {
    auto& members = by_class[static_cast<std::size_t>(j)];
    if (static_cast<int>(members.size()) < folds)
      throw std::invalid_argument("class " + std::to_string(j + 1) +
                                  " has fewer members than folds");
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t t = 0; t < members.size(); ++t)
      fold_of[static_cast<std::size_t>(members[t])] = static_cast<int>(t % folds);
  }
  return fold_of;
}

struct CvEntry {
  double lambda1 = 0.0, lambda2 = 0.0;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
};

struct CvResult {
  double lambda1 = 0.0, lambda2 = 0.0;
  std::vector<CvEntry> table;
};

// Pick the (lambda1, lambda2) pair maximizing mean validation accuracy over
// stratified folds; ties prefer the sparser model (larger lambda1, then larger
// lambda2). An empty grid2 defaults to {1} for the elastic net, where lambda2
// is insensitive, and to grid1 for the group/sup models.
inline CvResult cv_grid_search(const Dataset& data, RegularizerKind kind,
                               std::vector<double> grid1, std::vector<double> grid2 = {},
                               int folds = 3, std::uint64_t seed = 0,
                               const Hyperparams* base = nullptr) {
  if (grid1.empty()) throw std::invalid_argument("lambda1 grid is empty");
  if (grid2.empty())
    grid2 = kind == RegularizerKind::ElasticNet ? std::vector<double>{1.0} : grid1;
  const std::vector<int> fold_of = stratified_folds(data.labels, data.num_classes, folds, seed);

  std::vector<Dataset> train_part, valid_part;
  train_part.reserve(static_cast<std::size_t>(folds));
  valid_part.reserve(static_cast<std::size_t>(folds));
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> train_idx, valid_idx;
    for (Index i = 0; i < data.n(); ++i)
      (fold_of[static_cast<std::size_t>(i)] == f ? valid_idx : train_idx).push_back(i);
    train_part.push_back(subset_samples(data, train_idx));
    valid_part.push_back(subset_samples(data, valid_idx));
  }

  CvResult result;
  bool have_best = false;
  double best_accuracy = 0.0;
  for (double l1 : grid1) {
    for (double l2 : grid2) {
      CvEntry entry{l1, l2, {}, 0.0};
      for (int f = 0; f < folds; ++f) {
        const Dataset& train = train_part[static_cast<std::size_t>(f)];
        Hyperparams hp =
            base ? *base : default_hyperparams(train.n(), train.p(), train.num_classes);
        hp.lambda1 = l1;
        hp.lambda2 = l2;
        const FitReport fitted = fit(train, hp, kind);
        entry.fold_accuracy.push_back(
            accuracy(fitted.classifier, valid_part[static_cast<std::size_t>(f)]));
      }
      entry.mean_accuracy =
          std::accumulate(entry.fold_accuracy.begin(), entry.fold_accuracy.end(), 0.0) /
          static_cast<double>(folds);
      const bool better =
          !have_best || entry.mean_accuracy > best_accuracy ||
          (entry.mean_accuracy == best_accuracy &&
           (l1 > result.lambda1 || (l1 == result.lambda1 && l2 > result.lambda2)));
      if (better) {
        have_best = true;
        best_accuracy = entry.mean_accuracy;
        result.lambda1 = l1;
        result.lambda2 = l2;
      }
      result.table.push_back(std::move(entry));
    }
  }
  return result;
}

}  // namespace msvm
