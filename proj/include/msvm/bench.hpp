#pragma once

#include "msvm/cross_validation.hpp"
#include "msvm/model.hpp"
#include "msvm/solver.hpp"
#include "msvm/synthetic.hpp"
#include "msvm/types.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

namespace msvm {

struct BenchModel {
  RegularizerKind kind = RegularizerKind::ElasticNet;
  double lambda1 = 0.0;
  double lambda2 = 1.0;
};

// One synthetic benchmark: repeated generate/fit/score trials over a set of
// models. Trial i draws its training set with seed base_seed + i and its test
// set with seed base_seed + trials + i, so rows do not depend on execution order.
struct BenchConfig {
  SyntheticSpec::Variant variant = SyntheticSpec::Variant::FiveClass;
  int trials = 20;
  Index n_train = 200;
  Index n_test = 10000;
  Index p = 500;  // four-class only
  Index s = 30;   // four-class only
  double rho = 0.0;
  std::vector<BenchModel> models;
  // when nonempty, each model's lambdas are picked by stratified 3-fold
  // cross-validation over this grid on a dedicated tuning draw (seed
  // base_seed + 2*trials, disjoint from every trial seed) before the trials
  std::vector<double> tune_grid;
  std::uint64_t base_seed = 1;
  double lambda3 = 1.0;
  double tol = 1e-5;
  int maxit = 5000;
};

struct BenchSummary {
  BenchModel model;
  double mean_accuracy = 0.0;
  double se_accuracy = 0.0;  // sample std / sqrt(trials); 0 for a single trial
  double mean_time = 0.0;
  double mean_cz = 0.0, mean_iz = 0.0, mean_nr = 0.0;
  std::vector<double> mean_nz;
  bool all_converged = true;
};

struct BenchResult {
  std::string report;  // TSV with a fixed header row
  std::vector<BenchSummary> summaries;
  bool all_converged = true;
};

namespace detail {

inline void append_formatted(std::string& out, const char* fmt, ...) {
  char buffer[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buffer, sizeof(buffer), fmt, args);
  va_end(args);
  out += buffer;
}

inline double mean_of(const std::vector<double>& values) {
  return values.empty()
             ? 0.0
             : std::accumulate(values.begin(), values.end(), 0.0) /
                   static_cast<double>(values.size());
}

inline double standard_error(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double m = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return sd / std::sqrt(static_cast<double>(values.size()));
}

}  // namespace detail

inline BenchResult run_bench(const BenchConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("bench needs at least one trial");
  if (config.n_train < 1 || config.n_test < 1)
    throw std::invalid_argument("bench sample sizes must be positive");
  if (config.models.empty()) throw std::invalid_argument("bench needs at least one model");
  const bool five = config.variant == SyntheticSpec::Variant::FiveClass;
  const std::size_t num_models = config.models.size();

  std::vector<BenchModel> models = config.models;
  if (!config.tune_grid.empty()) {
    SyntheticSpec tune_spec;
    tune_spec.variant = config.variant;
    tune_spec.n = config.n_train;
    tune_spec.p = config.p;
    tune_spec.s = config.s;
    tune_spec.rho = config.rho;
    tune_spec.seed = config.base_seed + static_cast<std::uint64_t>(2 * config.trials);
    const SyntheticData tuning = generate(tune_spec);
    for (BenchModel& model : models) {
      const CvResult cv = cv_grid_search(tuning.data, model.kind, config.tune_grid, {}, 3,
                                         config.base_seed);
      model.lambda1 = cv.lambda1;
      model.lambda2 = cv.lambda2;
    }
  }

  struct Track {
    std::vector<double> accuracy, time, cz, iz, nr;
    std::vector<std::vector<double>> nz;
    bool all_converged = true;
  };
  std::vector<Track> tracks(num_models);

  BenchResult result;
  result.report = five ? "model\ttrial\taccuracy\tse\ttime\tcz\tiz\tnr\n"
                       : "model\ttrial\taccuracy\tse\ttime\tiz\tnz1\tnz2\tnz3\tnz4\n";

  SyntheticSpec spec;
  spec.variant = config.variant;
  spec.p = config.p;
  spec.s = config.s;
  spec.rho = config.rho;

  for (int trial = 0; trial < config.trials; ++trial) {
    spec.n = config.n_train;
    spec.seed = config.base_seed + static_cast<std::uint64_t>(trial);
    LabeledSplit split;
    try {
      split = make_split(spec, config.n_test,
                         config.base_seed + static_cast<std::uint64_t>(config.trials + trial));
    } catch (const std::exception& e) {
      throw std::runtime_error("bench trial " + std::to_string(trial) +
                               ": data generation failed: " + e.what());
    }

    for (std::size_t m = 0; m < num_models; ++m) {
      const BenchModel& model = models[m];
      Hyperparams hp = default_hyperparams(split.train.n(), split.train.p(),
                                           split.train.num_classes);
      hp.lambda1 = model.lambda1;
      hp.lambda2 = model.lambda2;
      hp.lambda3 = config.lambda3;
      hp.tol = config.tol;
      hp.maxit = config.maxit;

      FitReport fitted;
      try {
        fitted = fit(split.train, hp, model.kind);
      } catch (const std::exception& e) {
        throw std::runtime_error("bench trial " + std::to_string(trial) + ", model " +
                                 to_string(model.kind) + ": " + e.what());
      }
      const double acc = accuracy(fitted.classifier, split.test);
      const SparsityReport sparsity =
          sparsity_metrics(truncate(fitted.classifier.W), split.relevance_mask);

      Track& track = tracks[m];
      track.accuracy.push_back(acc);
      track.time.push_back(fitted.wall_seconds);
      track.all_converged = track.all_converged && fitted.converged;
      if (five) {
        track.cz.push_back(static_cast<double>(sparsity.correct_zeros));
        track.iz.push_back(static_cast<double>(sparsity.incorrect_zeros));
        track.nr.push_back(static_cast<double>(sparsity.nonzero_rows));
        detail::append_formatted(result.report, "%s\t%d\t%.4f\t0.0000\t%.3f\t%lld\t%lld\t%lld\n",
                                 to_string(model.kind), trial, acc, fitted.wall_seconds,
                                 static_cast<long long>(sparsity.correct_zeros),
                                 static_cast<long long>(sparsity.incorrect_zeros),
                                 static_cast<long long>(sparsity.nonzero_rows));
      } else {
        track.iz.push_back(static_cast<double>(sparsity.incorrect_zeros));
        if (track.nz.empty()) track.nz.resize(sparsity.nonzeros_per_column.size());
        for (std::size_t j = 0; j < sparsity.nonzeros_per_column.size(); ++j)
          track.nz[j].push_back(static_cast<double>(sparsity.nonzeros_per_column[j]));
        detail::append_formatted(
            result.report, "%s\t%d\t%.4f\t0.0000\t%.3f\t%lld\t%lld\t%lld\t%lld\t%lld\n",
            to_string(model.kind), trial, acc, fitted.wall_seconds,
            static_cast<long long>(sparsity.incorrect_zeros),
            static_cast<long long>(sparsity.nonzeros_per_column[0]),
            static_cast<long long>(sparsity.nonzeros_per_column[1]),
            static_cast<long long>(sparsity.nonzeros_per_column[2]),
            static_cast<long long>(sparsity.nonzeros_per_column[3]));
      }
    }
  }

  for (std::size_t m = 0; m < num_models; ++m) {
    const Track& track = tracks[m];
    BenchSummary summary;
    summary.model = models[m];
    summary.mean_accuracy = detail::mean_of(track.accuracy);
    summary.se_accuracy = detail::standard_error(track.accuracy);
    summary.mean_time = detail::mean_of(track.time);
    summary.all_converged = track.all_converged;
    result.all_converged = result.all_converged && track.all_converged;
    if (five) {
      summary.mean_cz = detail::mean_of(track.cz);
      summary.mean_iz = detail::mean_of(track.iz);
      summary.mean_nr = detail::mean_of(track.nr);
      detail::append_formatted(result.report, "%s\tmean\t%.4f\t%.4f\t%.3f\t%.2f\t%.2f\t%.2f\n",
                               to_string(summary.model.kind), summary.mean_accuracy,
                               summary.se_accuracy, summary.mean_time, summary.mean_cz,
                               summary.mean_iz, summary.mean_nr);
    } else {
      summary.mean_iz = detail::mean_of(track.iz);
      for (const auto& column : track.nz) summary.mean_nz.push_back(detail::mean_of(column));
      detail::append_formatted(result.report,
                               "%s\tmean\t%.4f\t%.4f\t%.3f\t%.2f\t%.2f\t%.2f\t%.2f\t%.2f\n",
                               to_string(summary.model.kind), summary.mean_accuracy,
                               summary.se_accuracy, summary.mean_time, summary.mean_iz,
                               summary.mean_nz[0], summary.mean_nz[1], summary.mean_nz[2],
                               summary.mean_nz[3]);
    }
    result.summaries.push_back(std::move(summary));
  }
  return result;
}

}  // namespace msvm
