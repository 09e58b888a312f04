#include "mkldd/svm_dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mkldd/error.hpp"

namespace mkldd {

double dual_objective(const Eigen::MatrixXd& gram, std::span<const int> labels,
                      const Eigen::VectorXd& alpha) {
  const auto n = alpha.size();
  Eigen::VectorXd ya(n);
  for (Eigen::Index i = 0; i < n; ++i) ya[i] = labels[static_cast<std::size_t>(i)] * alpha[i];
  return alpha.sum() - 0.5 * ya.dot(gram * ya);
}

DualSolution solve_dual(const Eigen::MatrixXd& gram, std::span<const int> labels, double C,
                        const DualOptions& opts, const Eigen::VectorXd* warm_start) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (gram.rows() != n || gram.cols() != n) throw ConfigError("solve_dual: gram/label size mismatch");
  if (!(C > 0.0)) throw ConfigError("solve_dual: C must be positive");
  bool has_pos = false;
  bool has_neg = false;
  for (int y : labels) {
    if (y == 1) {
      has_pos = true;
    } else if (y == -1) {
      has_neg = true;
    } else {
      throw DataError("solve_dual: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) throw DataError("solve_dual: both classes are required");

  const auto y = [&](Eigen::Index t) { return static_cast<double>(labels[static_cast<std::size_t>(t)]); };

  DualSolution sol;
  sol.alpha = warm_start ? *warm_start : Eigen::VectorXd::Zero(n);
  if (sol.alpha.size() != n) throw ConfigError("solve_dual: warm start has the wrong length");
  auto& a = sol.alpha;

  // grad = Q a - 1 with Q_ij = y_i y_j K_ij
  Eigen::VectorXd grad = -Eigen::VectorXd::Ones(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (a[j] == 0.0) continue;
    for (Eigen::Index t = 0; t < n; ++t) grad[t] += y(t) * y(j) * gram(t, j) * a[j];
  }

  const auto in_up = [&](Eigen::Index t) { return (y(t) > 0 && a[t] < C) || (y(t) < 0 && a[t] > 0); };
  const auto in_low = [&](Eigen::Index t) { return (y(t) > 0 && a[t] > 0) || (y(t) < 0 && a[t] < C); };

  sol.converged = false;
  for (sol.iterations = 0; sol.iterations < opts.max_iterations; ++sol.iterations) {
    double gmax = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (in_up(t) && -y(t) * grad[t] > gmax) {
        gmax = -y(t) * grad[t];
        i = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = y(t) * grad[t];
      gmax2 = std::max(gmax2, v);
      const double b = gmax + v;
      if (i >= 0 && b > 0.0) {
        double quad = gram(i, i) + gram(t, t) - 2.0 * gram(i, t);
        if (quad <= 0.0) quad = opts.tau;
        const double obj = -(b * b) / quad;
        if (obj < best) {
          best = obj;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || gmax + gmax2 < opts.tolerance) {
      sol.converged = true;
      break;
    }

    const double old_ai = a[i];
    const double old_aj = a[j];
    if (y(i) != y(j)) {
      double quad = gram(i, i) + gram(j, j) - 2.0 * gram(i, j);
      if (quad <= 0.0) quad = opts.tau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0.0) {
        if (a[j] < 0.0) {
          a[j] = 0.0;
          a[i] = diff;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = -diff;
      }
      if (diff > 0.0) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = C - diff;
        }
      } else if (a[j] > C) {
        a[j] = C;
        a[i] = C + diff;
      }
    } else {
      double quad = gram(i, i) + gram(j, j) - 2.0 * gram(i, j);
      if (quad <= 0.0) quad = opts.tau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > C) {
        if (a[i] > C) {
          a[i] = C;
          a[j] = sum - C;
        }
      } else if (a[j] < 0.0) {
        a[j] = 0.0;
        a[i] = sum;
      }
      if (sum > C) {
        if (a[j] > C) {
          a[j] = C;
          a[i] = sum - C;
        }
      } else if (a[i] < 0.0) {
        a[i] = 0.0;
        a[j] = sum;
      }
    }

    const double dai = a[i] - old_ai;
    const double daj = a[j] - old_aj;
    for (Eigen::Index t = 0; t < n; ++t) {
      grad[t] += y(t) * (y(i) * gram(t, i) * dai + y(j) * gram(t, j) * daj);
    }
  }

  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  int free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y(t) * grad[t];
    if (a[t] >= C) {
      if (y(t) < 0) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else if (a[t] <= 0.0) {
      if (y(t) > 0) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / free_count : 0.5 * (ub + lb);
  sol.bias = -rho;
  sol.objective = dual_objective(gram, labels, a);
  return sol;
}

}  // namespace mkldd
