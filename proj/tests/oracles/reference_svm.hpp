#pragma once

// Single-kernel soft-margin SVM trained by projected gradient ascent on the
// dual. The projection onto {0 <= a <= C, y'a = 0} is exact: bisection on the
// multiplier of the equality constraint. Slow, but independent of the SMO
// solver it is compared against.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline Eigen::VectorXd project_box_hyperplane(const Eigen::VectorXd& v, const std::vector<int>& y, double C) {
  const auto n = v.size();
  auto at = [&](double nu) {
    Eigen::VectorXd a(n);
    for (Eigen::Index i = 0; i < n; ++i) a[i] = std::clamp(v[i] - nu * y[i], 0.0, C);
    return a;
  };
  auto residual = [&](double nu) {
    const Eigen::VectorXd a = at(nu);
    double r = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) r += y[i] * a[i];
    return r;
  };
  // residual is non-increasing in nu
  double lo = -1.0, hi = 1.0;
  while (residual(lo) < 0.0) lo *= 2.0;
  while (residual(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0.0 ? lo : hi) = mid;
  }
  return at(0.5 * (lo + hi));
}

struct ReferenceSvm {
  Eigen::MatrixXd x;
  std::vector<int> y;
  Eigen::VectorXd alpha;
  double bias = 0.0;
};

template <class KernelFn>
ReferenceSvm train_reference_svm(const Eigen::MatrixXd& x, const std::vector<int>& y, double C, KernelFn k,
                                 int iterations = 20000) {
  const auto n = x.rows();
  Eigen::MatrixXd Q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) Q(i, j) = y[i] * y[j] * k(x.row(i), x.row(j));
  }
  const double L = Q.operatorNorm() + 1e-12;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd grad = Eigen::VectorXd::Ones(n) - Q * a;
    a = project_box_hyperplane(a + grad / L, y, C);
  }
  ReferenceSvm r{x, y, a, 0.0};
  // Bias from margin points, falling back to the midpoint of the KKT interval.
  const Eigen::VectorXd f0 = Q * a;  // y_i * sum_j a_j y_j K_ij
  double sum = 0.0;
  int count = 0;
  double lb = -1e300, ub = 1e300;
  const double eps = 1e-6 * C;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double g = y[i] * (1.0 - f0[i]);  // y_i - sum_j a_j y_j K_ij
    if (a[i] > eps && a[i] < C - eps) {
      sum += g;
      ++count;
    } else if ((a[i] <= eps) == (y[i] > 0)) {
      lb = std::max(lb, g);
    } else {
      ub = std::min(ub, g);
    }
  }
  r.bias = count > 0 ? sum / count : 0.5 * (lb + ub);
  return r;
}

template <class KernelFn>
double reference_score(const ReferenceSvm& m, const Eigen::RowVectorXd& z, KernelFn k) {
  double s = m.bias;
  for (Eigen::Index i = 0; i < m.x.rows(); ++i) s += m.alpha[i] * m.y[i] * k(m.x.row(i), z);
  return s;
}

}  // namespace oracle
