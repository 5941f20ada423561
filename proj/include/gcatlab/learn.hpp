#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gcatlab/dense.hpp"
#include "gcatlab/graph.hpp"

namespace gcatlab {

/// Per-column standardization fitted on training rows only. Columns whose
/// training standard deviation is below 1e-12 are dropped (scale 0, output 0).
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;  // 0 marks a dropped column

  static Standardizer fit(const DenseMatrix& z, std::span<const std::size_t> rows);
  /// Standardized copy of the given rows (all rows when `rows` is empty).
  DenseMatrix apply(const DenseMatrix& z, std::span<const std::size_t> rows = {}) const;
  std::size_t width() const noexcept { return mean.size(); }
};

enum class LinearKind : std::uint32_t { logreg = 0, svm = 1 };

struct LinearModel {
  DenseMatrix weights;  // C × K, in standardized feature space
  std::vector<double> bias;
  LinearKind kind = LinearKind::logreg;
  Standardizer standardizer;

  int num_classes() const noexcept { return static_cast<int>(weights.rows()); }
  std::size_t num_features() const noexcept { return weights.cols(); }

  // Training diagnostics; not serialized.
  std::vector<double> loss_history;
  int iterations = 0;
  bool converged = false;
};

struct LogregConfig {
  double l2 = -1.0;  // negative selects 1 / (number of training rows)
  int max_iter = 2000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

/// Multinomial logistic regression: mean cross-entropy + (l2/2)‖W‖²_F, bias
/// unregularized, full-batch gradient descent with Barzilai-Borwein trial
/// steps and Armijo backtracking.
LinearModel train_logreg(const DenseMatrix& z, const LabelVector& y, std::span<const std::size_t> train_idx,
                         const LogregConfig& cfg = {});

/// Objective on already-standardized rows; fills the gradients when non-null.
double logreg_objective(const DenseMatrix& zs, std::span<const int> labels, const DenseMatrix& w,
                        std::span<const double> bias, double l2, DenseMatrix* grad_w = nullptr,
                        std::vector<double>* grad_b = nullptr);

struct SvmConfig {
  double l2 = 1e-4;
  int epochs = 50;
  std::uint64_t seed = 0;
};

/// One-vs-rest linear SVM trained by Pegasos SGD (step 1/(l2·t)); the bias is
/// an extra always-one feature and is regularized with the weights. Returns the
/// average of the iterates over the second half of training.
LinearModel train_linear_svm(const DenseMatrix& z, const LabelVector& y, std::span<const std::size_t> train_idx,
                             const SvmConfig& cfg = {});

/// (l2/2)(‖w‖² + b²) + mean hinge(1 − t·(w·x + b)), targets t ∈ {−1, +1}.
double svm_objective(const DenseMatrix& zs, std::span<const double> targets, std::span<const double> w, double b,
                     double l2, std::vector<double>* grad_w = nullptr, double* grad_b = nullptr);

/// Class scores W·standardize(z) + b.
DenseMatrix decision_scores(const LinearModel& m, const DenseMatrix& z);
/// Argmax of the class scores; ties go to the lower class index.
LabelVector predict(const LinearModel& m, const DenseMatrix& z);

struct GcnConfig {
  int hidden = 16;
  double dropout = 0.5;
  int epochs = 200;
  double lr = 0.01;
  double weight_decay = 5e-4;
  std::uint64_t seed = 0;
};

/// softmax(Â · relu(Â X W0) · W1)
struct GcnModel {
  DenseMatrix w0;  // F × H
  DenseMatrix w1;  // H × C
  GcnConfig config;
  std::vector<double> loss_history;
};

GcnModel train_gcn(const NormalizedAdjacency& a, const FeatureMatrix& x, const LabelVector& y,
                   std::span<const std::size_t> train_idx, const GcnConfig& cfg = {});

/// Training loss without dropout: mean cross-entropy on train_idx + (wd/2)‖W0‖².
double gcn_objective(const NormalizedAdjacency& a, const FeatureMatrix& x, const LabelVector& y,
                     std::span<const std::size_t> train_idx, const DenseMatrix& w0, const DenseMatrix& w1,
                     double weight_decay, DenseMatrix* grad_w0 = nullptr, DenseMatrix* grad_w1 = nullptr);

/// Row-wise class probabilities at inference (dropout off).
DenseMatrix gcn_probabilities(const GcnModel& m, const NormalizedAdjacency& a, const FeatureMatrix& x);
LabelVector gcn_predict(const GcnModel& m, const NormalizedAdjacency& a, const FeatureMatrix& x);

/// Âᵏ X.
TransformedFeatures sgc_transform(const NormalizedAdjacency& a, const FeatureMatrix& x, int k = 2);

/// Fraction of test_idx where the prediction matches the truth.
double evaluate(const LabelVector& predictions, const LabelVector& truth, std::span<const std::size_t> test_idx);

// Binary container: "GCLM", u32 version, u32 kind (0 logreg, 1 svm, 2 gcn),
// u64 shapes, then row-major little-endian doubles.
void save_model(const LinearModel& m, const std::filesystem::path& path);
void save_model(const GcnModel& m, const std::filesystem::path& path);
LinearModel load_linear_model(const std::filesystem::path& path);
GcnModel load_gcn_model(const std::filesystem::path& path);

}  // namespace gcatlab
