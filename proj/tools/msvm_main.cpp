// Command-line front end: synthetic data generation, training, prediction,
// cross-validation, and benchmark reports.
//
// Exit codes: 0 success, 1 solver non-convergence/divergence (outputs are
// still written), 2 usage or I/O errors.

#include "msvm/bench.hpp"
#include "msvm/cross_validation.hpp"
#include "msvm/io.hpp"
#include "msvm/model.hpp"
#include "msvm/preprocess.hpp"
#include "msvm/solver.hpp"
#include "msvm/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 1;
constexpr int kExitUsage = 2;

msvm::LabelColumn parse_label_column(const std::string& spec) {
  if (spec == "last") return msvm::LabelColumn::last();
  if (spec == "none") return msvm::LabelColumn::none();
  try {
    std::size_t used = 0;
    const long index = std::stol(spec, &used);
    if (used == spec.size()) return msvm::LabelColumn::by_index(index);
  } catch (const std::exception&) {
  }
  return msvm::LabelColumn::by_name(spec);
}

msvm::SyntheticSpec::Variant parse_variant(const std::string& name) {
  if (name == "five-class") return msvm::SyntheticSpec::Variant::FiveClass;
  if (name == "four-class") return msvm::SyntheticSpec::Variant::FourClass;
  throw std::invalid_argument("unknown variant '" + name + "' (expected five-class|four-class)");
}

struct SolverOverrides {
  std::optional<double> lambda3, alpha, mu, nu, tol;
  std::optional<int> maxit;

  void apply(msvm::Hyperparams& hp) const {
    if (lambda3) hp.lambda3 = *lambda3;
    if (alpha) hp.alpha = *alpha;
    if (mu) hp.mu = *mu;
    if (nu) hp.nu = *nu;
    if (tol) hp.tol = *tol;
    if (maxit) hp.maxit = *maxit;
  }

  void add_options(CLI::App* cmd) {
    cmd->add_option("--lambda3", lambda3, "intercept ridge weight (default 1)");
    cmd->add_option("--alpha", alpha, "ADMM penalty for the margin block (default 50J/n)");
    cmd->add_option("--mu", mu, "ADMM penalty for the l1 block (default sqrt(pJ))");
    cmd->add_option("--nu", nu, "ADMM penalty for the row-norm block (default sqrt(pJ))");
    cmd->add_option("--tol", tol, "stopping tolerance (default 1e-5)");
    cmd->add_option("--maxit", maxit, "iteration cap (default 5000)");
  }
};

int cmd_gen(const std::string& variant, long n, long n_test, long p, long s, double rho,
            std::uint64_t seed, const std::string& out_prefix) {
  msvm::SyntheticSpec spec;
  spec.variant = parse_variant(variant);
  spec.n = n;
  spec.p = p;
  spec.s = s;
  spec.rho = rho;
  spec.seed = seed;
  const msvm::LabeledSplit split = msvm::make_split(spec, n_test, seed + 1);

  const std::string train_path = out_prefix + "_train.csv";
  const std::string test_path = out_prefix + "_test.csv";
  const std::string mask_path = out_prefix + "_mask.csv";
  msvm::save_csv(train_path, split.train);
  msvm::save_csv(test_path, split.test);
  msvm::save_mask_csv(mask_path, split.relevance_mask);
  std::cout << "variant\t" << variant << "\nn_train\t" << split.train.n() << "\nn_test\t"
            << split.test.n() << "\np\t" << split.train.p() << "\nJ\t" << split.train.num_classes
            << "\nseed\t" << seed << "\nfiles\t" << train_path << ' ' << test_path << ' '
            << mask_path << '\n';
  return kExitOk;
}

int cmd_train(const std::string& data_path, const std::string& reg, double lambda1,
              double lambda2, const SolverOverrides& overrides, const std::string& label_spec,
              const std::string& model_path, const std::string& trace_path) {
  const msvm::RegularizerKind kind = msvm::parse_regularizer(reg);
  const msvm::Dataset data =
      msvm::load_csv(data_path, parse_label_column(label_spec)).to_dataset();
  msvm::Hyperparams hp = msvm::default_hyperparams(data.n(), data.p(), data.num_classes);
  hp.lambda1 = lambda1;
  hp.lambda2 = lambda2;
  overrides.apply(hp);

  std::ofstream trace;
  msvm::ProgressCallback progress;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw msvm::IoError("cannot write '" + trace_path + "'");
    trace << "iter\tf\tr_a\tr_u\tr_v\n";
    progress = [&trace](int k, double f, double r_a, double r_u, double r_v) {
      char line[160];
      std::snprintf(line, sizeof(line), "%d\t%.8e\t%.3e\t%.3e\t%.3e\n", k, f, r_a, r_u, r_v);
      trace << line;
    };
  }

  const msvm::FitReport report = msvm::fit(data, hp, kind, nullptr, progress);
  msvm::save_model(model_path, report.classifier);

  std::printf("regularizer\t%s\nlambda\t%g %g %g\nconverged\t%s\niterations\t%d\n",
              msvm::to_string(kind), hp.lambda1, hp.lambda2, hp.lambda3,
              report.converged ? "yes" : "no", report.iterations);
  std::printf("split_objective\t%.8f\nobjective\t%.8f\n", report.split_obj,
              msvm::objective(data, report.classifier, hp, kind));
  std::printf("residuals\t%.3e %.3e %.3e\nrel_obj_change\t%.3e\ntime_sec\t%.3f\nmodel\t%s\n",
              report.final_residuals.primal_a, report.final_residuals.primal_u,
              report.final_residuals.primal_v, report.final_residuals.rel_obj_change,
              report.wall_seconds, model_path.c_str());
  return report.converged ? kExitOk : kExitNotConverged;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& label_spec, const std::string& out_path) {
  const msvm::Classifier clf = msvm::load_model(model_path);
  const msvm::CsvTable table = msvm::load_csv(data_path, parse_label_column(label_spec));
  if (table.features.rows() != clf.p())
    throw std::invalid_argument("model expects p = " + std::to_string(clf.p()) +
                                " features but data has " +
                                std::to_string(table.features.rows()));
  const msvm::IntVector predictions = msvm::predict_all(clf, table.features);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw msvm::IoError("cannot write '" + out_path + "'");
    out = &file;
  }
  for (msvm::Index i = 0; i < predictions.size(); ++i) *out << predictions[i] << '\n';
  if (table.labels) {
    msvm::Index hits = 0;
    for (msvm::Index i = 0; i < predictions.size(); ++i)
      if (predictions[i] == (*table.labels)[i]) ++hits;
    std::printf("accuracy\t%.4f\n",
                static_cast<double>(hits) / static_cast<double>(predictions.size()));
  }
  return kExitOk;
}

int cmd_cv(const std::string& data_path, const std::string& reg, std::vector<double> grid1,
           std::vector<double> grid2, int folds, std::uint64_t seed,
           const std::string& label_spec) {
  const msvm::RegularizerKind kind = msvm::parse_regularizer(reg);
  const msvm::Dataset data =
      msvm::load_csv(data_path, parse_label_column(label_spec)).to_dataset();
  if (grid1.empty()) grid1 = msvm::default_lambda_grid();
  const msvm::CvResult result = msvm::cv_grid_search(data, kind, grid1, grid2, folds, seed);

  std::printf("lambda1\tlambda2");
  for (int f = 0; f < folds; ++f) std::printf("\tfold%d", f + 1);
  std::printf("\tmean\n");
  for (const msvm::CvEntry& entry : result.table) {
    std::printf("%g\t%g", entry.lambda1, entry.lambda2);
    for (double acc : entry.fold_accuracy) std::printf("\t%.4f", acc);
    std::printf("\t%.4f\n", entry.mean_accuracy);
  }
  std::printf("selected\t%g\t%g\n", result.lambda1, result.lambda2);
  return kExitOk;
}

int cmd_bench(const std::string& variant, int trials, long n, long n_test, long p, long s,
              double rho, std::uint64_t seed, std::vector<std::string> regs,
              std::vector<double> lambda1, std::vector<double> lambda2, bool tune,
              std::vector<double> tune_grid, const SolverOverrides& overrides,
              const std::string& out_path) {
  msvm::BenchConfig config;
  config.variant = parse_variant(variant);
  config.trials = trials;
  config.n_train = n;
  config.n_test = n_test;
  config.p = p;
  config.s = s;
  config.rho = rho;
  config.base_seed = seed;
  if (tune && tune_grid.empty()) tune_grid = msvm::default_lambda_grid();
  config.tune_grid = std::move(tune_grid);
  if (overrides.lambda3) config.lambda3 = *overrides.lambda3;
  if (overrides.tol) config.tol = *overrides.tol;
  if (overrides.maxit) config.maxit = *overrides.maxit;

  if (regs.empty()) regs = {"elastic", "group", "sup"};
  auto pick = [](const std::vector<double>& values, std::size_t i, double fallback) {
    if (values.empty()) return fallback;
    return values.size() == 1 ? values[0] : values.at(i);
  };
  if (lambda1.size() > 1 && lambda1.size() != regs.size())
    throw std::invalid_argument("--lambda1 must have one value or one per --reg entry");
  if (lambda2.size() > 1 && lambda2.size() != regs.size())
    throw std::invalid_argument("--lambda2 must have one value or one per --reg entry");
  for (std::size_t i = 0; i < regs.size(); ++i)
    config.models.push_back(
        {msvm::parse_regularizer(regs[i]), pick(lambda1, i, 0.0), pick(lambda2, i, 1.0)});

  const msvm::BenchResult result = msvm::run_bench(config);
  if (out_path.empty()) {
    std::cout << result.report;
  } else {
    std::ofstream out(out_path);
    if (!out) throw msvm::IoError("cannot write '" + out_path + "'");
    out << result.report;
    for (const msvm::BenchSummary& summary : result.summaries)
      std::printf("%s\tlambda\t%g %g\tmean_accuracy\t%.4f\tse\t%.4f\n",
                  msvm::to_string(summary.model.kind), summary.model.lambda1,
                  summary.model.lambda2, summary.mean_accuracy, summary.se_accuracy);
    std::printf("report\t%s\n", out_path.c_str());
  }
  return result.all_converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized multiclass SVM solvers (elastic net, group lasso, supnorm) via ADMM"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate synthetic train/test data");
  std::string gen_variant = "five-class", gen_out = "synth";
  long gen_n = 200, gen_n_test = 1000, gen_p = 500, gen_s = 30;
  double gen_rho = 0.0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--variant", gen_variant, "five-class|four-class");
  gen->add_option("--n", gen_n, "training samples");
  gen->add_option("--n-test", gen_n_test, "test samples");
  gen->add_option("--p", gen_p, "dimension (four-class)");
  gen->add_option("--s", gen_s, "informative block width (four-class)");
  gen->add_option("--rho", gen_rho, "within-block correlation (four-class)");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "output file prefix");

  // train
  auto* train = app.add_subcommand("train", "fit a model and write a model file");
  std::string train_data, train_reg = "elastic", train_label = "last";
  std::string train_out = "model.txt", train_trace;
  double train_l1 = 0.0, train_l2 = 1.0;
  SolverOverrides train_overrides;
  train->add_option("data", train_data, "training CSV")->required();
  train->add_option("--reg", train_reg, "elastic|group|sup");
  train->add_option("--lambda1", train_l1, "l1 penalty weight");
  train->add_option("--lambda2", train_l2, "row regularizer weight");
  train_overrides.add_options(train);
  train->add_option("--label-col", train_label, "label column: last|none|<index>|<name>");
  train->add_option("--out", train_out, "model file path");
  train->add_option("--trace", train_trace, "write per-iteration TSV trace here");

  // predict
  auto* predict = app.add_subcommand("predict", "predict labels with a saved model");
  std::string pred_model, pred_data, pred_label = "last", pred_out;
  predict->add_option("model", pred_model, "model file")->required();
  predict->add_option("data", pred_data, "data CSV")->required();
  predict->add_option("--label-col", pred_label, "label column: last|none|<index>|<name>");
  predict->add_option("--out", pred_out, "write predictions here instead of stdout");

  // cv
  auto* cv = app.add_subcommand("cv", "grid search lambdas by stratified cross-validation");
  std::string cv_data, cv_reg = "elastic", cv_label = "last";
  std::vector<double> cv_grid1, cv_grid2;
  int cv_folds = 3;
  std::uint64_t cv_seed = 0;
  cv->add_option("data", cv_data, "training CSV")->required();
  cv->add_option("--reg", cv_reg, "elastic|group|sup");
  cv->add_option("--grid1", cv_grid1, "lambda1 candidates (default: built-in grid)")
      ->delimiter(',');
  cv->add_option("--grid2", cv_grid2, "lambda2 candidates (default: 1 for elastic, grid1 otherwise)")
      ->delimiter(',');
  cv->add_option("--folds", cv_folds, "number of folds (default 3)");
  cv->add_option("--seed", cv_seed, "fold assignment seed");
  cv->add_option("--label-col", cv_label, "label column: last|none|<index>|<name>");

  // bench
  auto* bench = app.add_subcommand("bench", "repeated-trial synthetic benchmark, TSV report");
  std::string bench_variant = "five-class", bench_out;
  int bench_trials = 20;
  long bench_n = 200, bench_n_test = 10000, bench_p = 500, bench_s = 30;
  double bench_rho = 0.0;
  std::uint64_t bench_seed = 1;
  std::vector<std::string> bench_regs;
  std::vector<double> bench_l1, bench_l2, bench_tune_grid;
  bool bench_tune = false;
  SolverOverrides bench_overrides;
  bench->add_option("--variant", bench_variant, "five-class|four-class");
  bench->add_option("--trials", bench_trials, "number of independent trials");
  bench->add_option("--n", bench_n, "training samples per trial");
  bench->add_option("--n-test", bench_n_test, "test samples per trial");
  bench->add_option("--p", bench_p, "dimension (four-class)");
  bench->add_option("--s", bench_s, "informative block width (four-class)");
  bench->add_option("--rho", bench_rho, "within-block correlation (four-class)");
  bench->add_option("--seed", bench_seed, "base seed; trial i uses base_seed + i");
  bench->add_option("--reg", bench_regs, "models to run (default: elastic,group,sup)")
      ->delimiter(',');
  bench->add_option("--lambda1", bench_l1, "lambda1 per model (scalar broadcasts)")
      ->delimiter(',');
  bench->add_option("--lambda2", bench_l2, "lambda2 per model (scalar broadcasts)")
      ->delimiter(',');
  bench->add_flag("--tune", bench_tune,
                  "pick lambdas by cross-validation on a dedicated tuning draw");
  bench->add_option("--tune-grid", bench_tune_grid, "lambda grid for --tune (default: built-in)")
      ->delimiter(',');
  bench_overrides.add_options(bench);
  bench->add_option("--out", bench_out, "report path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_gen(gen_variant, gen_n, gen_n_test, gen_p, gen_s, gen_rho, gen_seed, gen_out);
    if (train->parsed())
      return cmd_train(train_data, train_reg, train_l1, train_l2, train_overrides, train_label,
                       train_out, train_trace);
    if (predict->parsed()) return cmd_predict(pred_model, pred_data, pred_label, pred_out);
    if (cv->parsed()) return cmd_cv(cv_data, cv_reg, cv_grid1, cv_grid2, cv_folds, cv_seed,
                                    cv_label);
    if (bench->parsed())
      return cmd_bench(bench_variant, bench_trials, bench_n, bench_n_test, bench_p, bench_s,
                       bench_rho, bench_seed, bench_regs, bench_l1, bench_l2, bench_tune,
                       bench_tune_grid, bench_overrides, bench_out);
  } catch (const msvm::SolverDivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
