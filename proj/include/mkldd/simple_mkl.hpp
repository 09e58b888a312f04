#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mkldd/features.hpp"
#include "mkldd/kernels.hpp"
#include "mkldd/svm_dual.hpp"

namespace mkldd {

struct MklOptions {
  int max_iter = 200;
  double tolerance = 1e-5;  // stop once |J(d_k) - J(d_{k+1})| falls below this
  double armijo = 1e-4;     // sufficient-decrease constant of the line search
  double initial_step = 1.0;
  double min_step = 1e-8;
  DualOptions dual;
  bool operator==(const MklOptions&) const = default;
};

struct SupportVector {
  std::vector<double> x;  // normalized, before feature weighting
  int y = 1;
  double alpha = 0.0;
};

/// A trained SimpleMKL classifier. Inputs are mapped through `normalizer`,
/// multiplied elementwise by `feature_weights`, and scored with the
/// combined kernel sum_m d_m k_m.
struct MklModel {
  std::vector<KernelSpec> kernels;
  std::vector<double> d;
  std::vector<SupportVector> support;
  double bias = 0.0;
  std::vector<double> feature_weights;
  double C = 1.0;
  Normalizer normalizer;

  double objective = 0.0;  // J(d) at the returned iterate
  int iterations = 0;
  bool converged = true;
};

struct MklIterate {
  std::vector<double> d;
  double objective = 0.0;
};

/// Every accepted iterate of the outer loop, starting with the uniform d.
struct MklTrace {
  std::vector<MklIterate> iterates;
};

/// Euclidean projection onto {d : sum d = 1, d >= 0}.
std::vector<double> project_simplex(std::span<const double> v);

/// dJ/dd_m = -1/2 sum_ij a_i a_j y_i y_j G_m(i, j) at fixed alpha.
std::vector<double> objective_gradient(std::span<const Eigen::MatrixXd> grams, std::span<const int> y,
                                       const Eigen::VectorXd& alpha);

/// SimpleMKL: alternate an exact dual solve at fixed d with a reduced-gradient
/// step on d (Armijo backtracking from `initial_step`, halving). Rows of `x`
/// are samples; `feature_weights` (all ones when empty) scale every row
/// before the kernels see it. J(d) never increases between accepted
/// iterates. When max_iter runs out the model carries converged = false.
MklModel simple_mkl_train(const Eigen::MatrixXd& x, std::span<const int> y,
                          const std::vector<KernelSpec>& kernels, double C, const MklOptions& opts = {},
                          std::span<const double> feature_weights = {}, MklTrace* trace = nullptr);

/// Single-kernel soft-margin SVM expressed as a one-kernel model.
MklModel svm_train(const Eigen::MatrixXd& x, std::span<const int> y, const KernelSpec& kernel, double C,
                   const DualOptions& opts = {});

/// sum_sv alpha y K_d(w*sv, w*x') + b where x' is `x` after normalization.
double decision_score(const MklModel& model, std::span<const double> x);
double decision_score(const MklModel& model, const FeatureVector& x);

/// sign(score), with a zero score counted as normal.
Label classify(const MklModel& model, std::span<const double> x);
Label classify(const MklModel& model, const FeatureVector& x);

/// Samples as an n x 5 matrix plus +1/-1 labels.
Eigen::MatrixXd to_matrix(std::span<const FeatureVector> rows);
Eigen::MatrixXd to_matrix(std::span<const LabeledSample> samples);
std::vector<int> to_labels(std::span<const LabeledSample> samples);

}  // namespace mkldd
