#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mkldd {

enum class KernelKind { kGaussian, kPolynomial, kLinear };

struct KernelSpec {
  KernelKind kind = KernelKind::kLinear;
  double bandwidth = 1.0;  // gaussian
  int degree = 2;          // polynomial
  double coef0 = 1.0;      // polynomial

  static KernelSpec gaussian(double bandwidth);
  static KernelSpec polynomial(int degree, double coef0);
  static KernelSpec linear();

  void validate() const;

  /// "gaussian:0.5", "poly:2:1", "linear".
  std::string to_string() const;
  static KernelSpec parse(const std::string& text);

  bool operator==(const KernelSpec&) const = default;
};

/// Two gaussians and two polynomials.
std::vector<KernelSpec> default_kernel_bank();

/// gaussian: exp(-|x-y|^2 / (2 bandwidth^2)); polynomial: (x.y + coef0)^degree;
/// linear: x.y. Throws ConfigError when the lengths differ.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// Gram matrix over the rows of `samples`.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& samples);

/// Cross-kernel matrix K(a_i, b_j).
Eigen::MatrixXd cross_kernel(const KernelSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// sum_m d_m G_m over precomputed base Gram matrices.
Eigen::MatrixXd combine_grams(std::span<const Eigen::MatrixXd> grams, std::span<const double> d);

/// sum_m d_m k_m evaluated over the rows of `samples`.
Eigen::MatrixXd combined_gram(std::span<const KernelSpec> kernels, std::span<const double> d,
                              const Eigen::MatrixXd& samples);

}  // namespace mkldd
