#include "msvm/bench.hpp"
#include "msvm/io.hpp"
#include "msvm/synthetic.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

using namespace msvm;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("msvm_io_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::filesystem::path dir_;
};

using CsvIo = TempDir;
using ModelIo = TempDir;
using BenchHarness = TempDir;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_F(CsvIo, DatasetRoundTripIsExact) {
  const SyntheticData synth = gen_five_class(17, 3);
  save_csv(path("data.csv"), synth.data);
  const Dataset loaded = load_csv(path("data.csv")).to_dataset();
  EXPECT_EQ(loaded.p(), synth.data.p());
  EXPECT_EQ(loaded.n(), synth.data.n());
  EXPECT_EQ(loaded.num_classes, 5);
  EXPECT_TRUE((loaded.features.array() == synth.data.features.array()).all());
  EXPECT_TRUE((loaded.labels.array() == synth.data.labels.array()).all());
}

TEST_F(CsvIo, TwoRowFileWithHeader) {
  write_file(path("small.csv"), "a,b,label\n0.5,1.5,1\n-0.25,2.5,2\n");
  const CsvTable table = load_csv(path("small.csv"));
  EXPECT_EQ(table.features.rows(), 2);
  EXPECT_EQ(table.features.cols(), 2);
  ASSERT_TRUE(table.labels.has_value());
  EXPECT_EQ((*table.labels)[0], 1);
  EXPECT_EQ((*table.labels)[1], 2);
  EXPECT_EQ(table.header.size(), 3u);
}

TEST_F(CsvIo, MalformedCellNamesRowAndColumn) {
  write_file(path("bad.csv"),
             "1,2,3,4,5,1\n1,2,3,4,5,1\n1,2,3,4,xyz,1\n");
  try {
    load_csv(path("bad.csv"));
    FAIL() << "expected CsvError";
  } catch (const CsvError& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("column 5"), std::string::npos) << e.what();
  }
}

TEST_F(CsvIo, InconsistentArityAndBadLabels) {
  write_file(path("ragged.csv"), "1,2,1\n1,2\n");
  EXPECT_THROW(load_csv(path("ragged.csv")), CsvError);
  write_file(path("badlabel.csv"), "1,2,0\n");
  EXPECT_THROW(load_csv(path("badlabel.csv")), CsvError);
  write_file(path("fractional.csv"), "1,2,1.5\n");
  EXPECT_THROW(load_csv(path("fractional.csv")), CsvError);
  EXPECT_THROW(load_csv(path("missing.csv")), IoError);
}

TEST_F(CsvIo, LabelColumnSelection) {
  write_file(path("named.csv"), "y,f1,f2\n2,0.1,0.2\n1,0.3,0.4\n");
  const CsvTable by_name = load_csv(path("named.csv"), LabelColumn::by_name("y"));
  ASSERT_TRUE(by_name.labels.has_value());
  EXPECT_EQ((*by_name.labels)[0], 2);
  EXPECT_DOUBLE_EQ(by_name.features(0, 0), 0.1);

  const CsvTable by_index = load_csv(path("named.csv"), LabelColumn::by_index(0));
  EXPECT_EQ((*by_index.labels)[1], 1);

  const CsvTable unlabeled = load_csv(path("named.csv"), LabelColumn::none());
  EXPECT_FALSE(unlabeled.labels.has_value());
  EXPECT_EQ(unlabeled.features.rows(), 3);
  EXPECT_THROW(unlabeled.to_dataset(), CsvError);

  EXPECT_THROW(load_csv(path("named.csv"), LabelColumn::by_name("nope")), CsvError);
  EXPECT_THROW(load_csv(path("named.csv"), LabelColumn::by_index(3)), CsvError);
}

TEST_F(ModelIo, RoundTripIsBitIdentical) {
  std::mt19937_64 rng(521);
  const Classifier clf{oracle::random_matrix(7, 4, rng) * 1e-7,
                       oracle::random_matrix(4, 1, rng).col(0) * 1e3};
  save_model(path("model.txt"), clf);
  const Classifier loaded = load_model(path("model.txt"));
  EXPECT_TRUE((loaded.W.array() == clf.W.array()).all());
  EXPECT_TRUE((loaded.b.array() == clf.b.array()).all());
}

TEST_F(ModelIo, RejectsTruncatedOrMissingFiles) {
  EXPECT_THROW(load_model(path("absent.txt")), IoError);
  write_file(path("short.txt"), "3 3\n1 2 3\n");
  EXPECT_THROW(load_model(path("short.txt")), IoError);
  write_file(path("header.txt"), "0 5\n");
  EXPECT_THROW(load_model(path("header.txt")), IoError);
}

TEST_F(ModelIo, MaskFileHoldsBinaryRows) {
  const SyntheticData synth = gen_five_class(10, 1);
  save_mask_csv(path("mask.csv"), synth.relevance_mask);
  const std::string text = read_file(path("mask.csv"));
  std::stringstream lines(text);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    if (rows < 2)
      EXPECT_EQ(line, "1,1,1,1,1");
    else
      EXPECT_EQ(line, "0,0,0,0,0");
    ++rows;
  }
  EXPECT_EQ(rows, 10);
}

TEST_F(BenchHarness, TinyFiveClassReportLayoutAndDeterminism) {
  BenchConfig config;
  config.variant = SyntheticSpec::Variant::FiveClass;
  config.trials = 2;
  config.n_train = 30;
  config.n_test = 40;
  config.base_seed = 5;
  config.models = {{RegularizerKind::ElasticNet, 0.05, 1.0}};
  const BenchResult first = run_bench(config);
  const BenchResult second = run_bench(config);

  std::stringstream lines(first.report);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "model\ttrial\taccuracy\tse\ttime\tcz\tiz\tnr");
  int data_rows = 0;
  std::string last;
  while (std::getline(lines, line)) {
    ++data_rows;
    last = line;
  }
  EXPECT_EQ(data_rows, 3);  // 2 trials + 1 summary
  EXPECT_EQ(last.rfind("elastic\tmean\t", 0), 0u);

  // identical except the wall-time column
  auto strip_time = [](const std::string& report) {
    std::stringstream in(report);
    std::string out, row, cell;
    while (std::getline(in, row)) {
      std::stringstream cells(row);
      int c = 0;
      while (std::getline(cells, cell, '\t')) {
        if (c != 4) out += cell + '\t';
        ++c;
      }
      out += '\n';
    }
    return out;
  };
  EXPECT_EQ(strip_time(first.report), strip_time(second.report));
  ASSERT_EQ(first.summaries.size(), 1u);
  EXPECT_EQ(first.summaries[0].mean_accuracy, second.summaries[0].mean_accuracy);
}

TEST_F(BenchHarness, SingleTrialReportsZeroStandardError) {
  BenchConfig config;
  config.variant = SyntheticSpec::Variant::FourClass;
  config.trials = 1;
  config.n_train = 24;
  config.n_test = 30;
  config.p = 20;
  config.s = 4;
  config.rho = 0.0;
  config.base_seed = 11;
  config.models = {{RegularizerKind::GroupLasso, 0.05, 0.05}};
  const BenchResult result = run_bench(config);
  ASSERT_EQ(result.summaries.size(), 1u);
  EXPECT_EQ(result.summaries[0].se_accuracy, 0.0);
  EXPECT_EQ(result.summaries[0].mean_nz.size(), 4u);
  EXPECT_NE(result.report.find("model\ttrial\taccuracy\tse\ttime\tiz\tnz1\tnz2\tnz3\tnz4"),
            std::string::npos);
}

TEST_F(BenchHarness, TuneGridPicksLambdasBeforeTheTrials) {
  BenchConfig config;
  config.variant = SyntheticSpec::Variant::FiveClass;
  config.trials = 1;
  config.n_train = 30;
  config.n_test = 40;
  config.base_seed = 3;
  config.models = {{RegularizerKind::ElasticNet, 0.0, 1.0}};
  config.tune_grid = {0.01, 1e6};  // the degenerate penalty loses on every fold
  const BenchResult result = run_bench(config);
  ASSERT_EQ(result.summaries.size(), 1u);
  EXPECT_DOUBLE_EQ(result.summaries[0].model.lambda1, 0.01);
  EXPECT_DOUBLE_EQ(result.summaries[0].model.lambda2, 1.0);
}

TEST_F(BenchHarness, RejectsBadConfigs) {
  BenchConfig config;
  config.trials = 0;
  config.models = {{RegularizerKind::ElasticNet, 0.0, 1.0}};
  EXPECT_THROW(run_bench(config), std::invalid_argument);
  config.trials = 1;
  config.models.clear();
  EXPECT_THROW(run_bench(config), std::invalid_argument);
}
