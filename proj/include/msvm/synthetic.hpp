#pragma once

#include "msvm/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace msvm {

struct SyntheticData {
  Dataset data;
  Matrix relevance_mask;  // p x J ground truth: 1 where a weight should be nonzero
};

struct LabeledSplit {
  Dataset train;
  Dataset test;
  Matrix relevance_mask;
};

struct SyntheticSpec {
  enum class Variant { FiveClass, FourClass };
  Variant variant = Variant::FiveClass;
  Index n = 200;
  Index p = 500;  // FourClass only (FiveClass is fixed at p = 10)
  Index s = 30;   // FourClass informative block width
  double rho = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

// Near-equal class counts; any remainder goes to the lowest labels.
inline IntVector balanced_labels(Index n, int num_classes) {
  IntVector labels(n);
  Index pos = 0;
  for (int j = 1; j <= num_classes; ++j) {
    const Index count = n / num_classes + (j <= n % num_classes ? 1 : 0);
    for (Index t = 0; t < count; ++t) labels[pos++] = j;
  }
  return labels;
}

}  // namespace detail

// Mean of the informative pair for class j (1-based): 2 [cos((2j-1)pi/5), sin((2j-1)pi/5)].
inline std::pair<double, double> five_class_mean(int label) {
  const double angle = (2.0 * label - 1.0) * std::acos(-1.0) / 5.0;
  return {2.0 * std::cos(angle), 2.0 * std::sin(angle)};
}

// Five classes in 10 dimensions: (x1, x2) ~ N(mu_j, 2 I) with the class means
// on a circle of radius 2; the remaining eight coordinates are standard normal
// noise for every class. The mask marks rows 1-2 relevant for all classes.
inline SyntheticData gen_five_class(Index n, std::uint64_t seed) {
  if (n < 5) throw std::invalid_argument("gen_five_class needs n >= 5");
  constexpr Index p = 10;
  constexpr int num_classes = 5;
  IntVector labels = detail::balanced_labels(n, num_classes);
  Matrix x(p, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double noise = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    const auto [m1, m2] = five_class_mean(labels[i]);
    x(0, i) = m1 + noise * gauss(rng);
    x(1, i) = m2 + noise * gauss(rng);
    for (Index d = 2; d < p; ++d) x(d, i) = gauss(rng);
  }
  Matrix mask = Matrix::Zero(p, num_classes);
  mask.topRows(2).setOnes();
  return {Dataset(std::move(x), std::move(labels), num_classes), std::move(mask)};
}

// Four classes in p dimensions with +-1 mean blocks of width s (classes 1/2 on
// coordinates 1..s, classes 3/4 on s/2+1..3s/2) and equicorrelation rho inside
// the mean block, sampled through a Cholesky factor of rho E + (1 - rho) I.
inline SyntheticData gen_four_class(Index n, Index p, Index s, double rho, std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("gen_four_class needs n >= 4");
  if (s < 2 || s % 2 != 0) throw std::invalid_argument("block width s must be even and >= 2");
  if (p < 3 * s / 2) throw std::invalid_argument("need p >= 3s/2");
  if (rho < 0 || rho >= 1) throw std::invalid_argument("rho must lie in [0, 1)");
  constexpr int num_classes = 4;
  IntVector labels = detail::balanced_labels(n, num_classes);

  Matrix block = Matrix::Constant(s, s, rho);
  block.diagonal().setConstant(1.0);
  Eigen::LLT<Matrix> llt(block);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("equicorrelation block is not positive definite");
  const Matrix chol = llt.matrixL();

  Matrix x(p, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector z(p);
  for (Index i = 0; i < n; ++i) {
    for (Index d = 0; d < p; ++d) z[d] = gauss(rng);
    const int label = labels[i];
    const Index block_start = label <= 2 ? 0 : s / 2;
    const double mean = (label == 1 || label == 3) ? 1.0 : -1.0;
    Vector col = z;
    col.segment(block_start, s) = chol * z.segment(block_start, s);
    col.segment(block_start, s).array() += mean;
    x.col(i) = col;
  }
  Matrix mask = Matrix::Zero(p, num_classes);
  mask.block(0, 0, s, 2).setOnes();
  mask.block(s / 2, 2, s, 2).setOnes();
  return {Dataset(std::move(x), std::move(labels), num_classes), std::move(mask)};
}

inline SyntheticData generate(const SyntheticSpec& spec) {
  switch (spec.variant) {
    case SyntheticSpec::Variant::FiveClass: return gen_five_class(spec.n, spec.seed);
    case SyntheticSpec::Variant::FourClass:
      return gen_four_class(spec.n, spec.p, spec.s, spec.rho, spec.seed);
  }
  throw std::invalid_argument("unknown synthetic variant");
}

// Train/test pair from one spec; the test draw uses its own seed.
inline LabeledSplit make_split(SyntheticSpec spec, Index n_test, std::uint64_t test_seed) {
  SyntheticData train = generate(spec);
  spec.n = n_test;
  spec.seed = test_seed;
  SyntheticData test = generate(spec);
  return {std::move(train.data), std::move(test.data), std::move(train.relevance_mask)};
}

}  // namespace msvm
