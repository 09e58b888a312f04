#pragma once

#include <span>

#include <Eigen/Dense>

namespace mkldd {

struct DualOptions {
  double tolerance = 1e-8;          // stop when the maximal KKT violation drops below this
  long max_iterations = 10'000'000;
  double tau = 1e-12;               // curvature floor for non-PD pairs
  bool operator==(const DualOptions&) const = default;
};

/// Solution of  max  sum a_i - 1/2 sum a_i a_j y_i y_j K_ij
///              s.t. 0 <= a_i <= C,  sum a_i y_i = 0.
struct DualSolution {
  Eigen::VectorXd alpha;
  double bias = 0.0;
  double objective = 0.0;
  long iterations = 0;
  bool converged = true;
};

/// Soft-margin SVM dual by SMO with second-order working-set selection.
/// Ties in pair selection go to the lowest index, so results are
/// reproducible bit for bit. The bias averages y_i - f_0(x_i) over free
/// support vectors, or takes the midpoint of the feasible interval when
/// every alpha sits on a bound.
///
/// `warm_start`, when given, must be feasible for the box and equality
/// constraints. Throws DataError when only one class is present.
DualSolution solve_dual(const Eigen::MatrixXd& gram, std::span<const int> labels, double C,
                        const DualOptions& opts = {}, const Eigen::VectorXd* warm_start = nullptr);

double dual_objective(const Eigen::MatrixXd& gram, std::span<const int> labels,
                      const Eigen::VectorXd& alpha);

}  // namespace mkldd
