#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace msvm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

// Row regularizer phi(W) of the model: squared Frobenius (elastic net),
// sum of row 2-norms (group lasso) or sum of row sup-norms.
enum class RegularizerKind { ElasticNet, GroupLasso, Supnorm };

inline const char* to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::ElasticNet: return "elastic";
    case RegularizerKind::GroupLasso: return "group";
    case RegularizerKind::Supnorm: return "sup";
  }
  throw std::invalid_argument("unknown regularizer kind");
}

inline RegularizerKind parse_regularizer(const std::string& name) {
  if (name == "elastic") return RegularizerKind::ElasticNet;
  if (name == "group") return RegularizerKind::GroupLasso;
  if (name == "sup") return RegularizerKind::Supnorm;
  throw std::invalid_argument("unknown regularizer '" + name + "' (expected elastic|group|sup)");
}

// Labeled samples. Column i of `features` is sample x_i; labels are 1-based.
struct Dataset {
  Matrix features;   // p x n
  IntVector labels;  // length n, values in 1..num_classes
  int num_classes = 0;

  Dataset() = default;
  Dataset(Matrix features_, IntVector labels_, int num_classes_)
      : features(std::move(features_)), labels(std::move(labels_)), num_classes(num_classes_) {
    validate();
  }

  Index p() const { return features.rows(); }
  Index n() const { return features.cols(); }

  void validate() const {
    if (features.rows() < 1 || features.cols() < 1)
      throw std::invalid_argument("dataset needs p >= 1 and n >= 1");
    if (num_classes < 2) throw std::invalid_argument("dataset needs at least two classes");
    if (labels.size() != features.cols())
      throw std::invalid_argument("label count does not match sample count");
    if (!features.allFinite()) throw std::invalid_argument("dataset contains non-finite features");
    for (Index i = 0; i < labels.size(); ++i)
      if (labels[i] < 1 || labels[i] > num_classes)
        throw std::invalid_argument("label out of range at sample " + std::to_string(i));
  }
};

// c_ij = 1 when sample i does not belong to class j, i.e. the (i, j) pairs the
// hinge loss penalizes. Every row carries exactly J-1 ones.
struct CostMask {
  Matrix c;  // n x J of {0, 1}

  explicit CostMask(const Dataset& data) : c(Matrix::Ones(data.n(), data.num_classes)) {
    for (Index i = 0; i < data.n(); ++i) c(i, data.labels[i] - 1) = 0.0;
  }
};

// J linear classifiers f_j(x) = w_j^T x + b_j with sum-to-zero structure:
// W e = 0 across columns and e^T b = 0.
struct Classifier {
  Matrix W;  // p x J
  Vector b;  // J

  Index p() const { return W.rows(); }
  int num_classes() const { return static_cast<int>(W.cols()); }

  bool feasible(double rel_tol = 1e-8) const {
    if (W.size() == 0 || b.size() == 0) return false;
    const double w_scale = std::max(1.0, W.cwiseAbs().maxCoeff());
    const double b_scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    const double row_violation = (W * Vector::Ones(W.cols())).cwiseAbs().maxCoeff();
    return row_violation <= rel_tol * w_scale && std::abs(b.sum()) <= rel_tol * b_scale;
  }
};

// Penalty weights and ADMM controls. `nu` only matters for the group/sup models.
struct Hyperparams {
  double lambda1 = 0.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;
  double alpha = 1.0;
  double mu = 1.0;
  double nu = 1.0;
  double tol = 1e-5;
  int maxit = 5000;

  void validate() const {
    if (lambda1 < 0 || lambda2 < 0)
      throw std::invalid_argument("lambda1 and lambda2 must be nonnegative");
    if (lambda3 <= 0) throw std::invalid_argument("lambda3 must be positive");
    if (alpha <= 0 || mu <= 0 || nu <= 0)
      throw std::invalid_argument("penalty parameters alpha, mu, nu must be positive");
    if (tol <= 0) throw std::invalid_argument("tol must be positive");
    if (maxit < 1) throw std::invalid_argument("maxit must be positive");
  }
};

}  // namespace msvm
