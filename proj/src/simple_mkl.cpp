#include "mkldd/simple_mkl.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "mkldd/error.hpp"

namespace mkldd {

std::vector<double> project_simplex(std::span<const double> v) {
  if (v.empty()) throw ConfigError("project_simplex: empty vector");
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t m = 0; m < v.size(); ++m) out[m] = std::max(v[m] - theta, 0.0);
  // Absorb rounding so the weights sum to one to within an ulp or two.
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (auto& x : out) x /= total;
  return out;
}

std::vector<double> objective_gradient(std::span<const Eigen::MatrixXd> grams, std::span<const int> y,
                                       const Eigen::VectorXd& alpha) {
  Eigen::VectorXd ya(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) ya[i] = y[static_cast<std::size_t>(i)] * alpha[i];
  std::vector<double> g;
  g.reserve(grams.size());
  for (const auto& gm : grams) g.push_back(-0.5 * ya.dot(gm * ya));
  return g;
}

namespace {

Eigen::MatrixXd weighted_rows(const Eigen::MatrixXd& x, std::span<const double> w) {
  if (w.empty()) return x;
  if (static_cast<Eigen::Index>(w.size()) != x.cols()) {
    throw ConfigError("feature weight count does not match the sample dimension");
  }
  const Eigen::Map<const Eigen::RowVectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  return x.array().rowwise() * wv.array();
}

// Reduced gradient descent direction on the simplex, pivoting on the largest
// weight (lowest index on ties).
std::vector<double> descent_direction(std::span<const double> d, std::span<const double> g) {
  const auto mu = static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
  std::vector<double> dir(d.size(), 0.0);
  double pivot = 0.0;
  for (std::size_t m = 0; m < d.size(); ++m) {
    if (m == mu) continue;
    const double reduced = g[m] - g[mu];
    if (d[m] <= 0.0 && reduced > 0.0) continue;
    dir[m] = -reduced;
    pivot -= dir[m];
  }
  dir[mu] = pivot;
  return dir;
}

}  // namespace

MklModel simple_mkl_train(const Eigen::MatrixXd& x, std::span<const int> y,
                          const std::vector<KernelSpec>& kernels, double C, const MklOptions& opts,
                          std::span<const double> feature_weights, MklTrace* trace) {
  if (kernels.empty()) throw ConfigError("simple_mkl_train: kernel list is empty");
  if (x.rows() != static_cast<Eigen::Index>(y.size())) {
    throw ConfigError("simple_mkl_train: sample/label count mismatch");
  }
  for (const auto& k : kernels) k.validate();

  const Eigen::MatrixXd xw = weighted_rows(x, feature_weights);
  std::vector<Eigen::MatrixXd> grams;
  grams.reserve(kernels.size());
  for (const auto& k : kernels) grams.push_back(gram_matrix(k, xw));

  const std::size_t nk = kernels.size();
  std::vector<double> d(nk, 1.0 / static_cast<double>(nk));
  DualSolution sol = solve_dual(combine_grams(grams, d), y, C, opts.dual);
  double J = sol.objective;
  if (trace) trace->iterates.push_back({d, J});

  bool converged = nk == 1;
  int iter = 0;
  while (!converged && iter < opts.max_iter) {
    ++iter;
    const auto g = objective_gradient(grams, y, sol.alpha);
    const auto dir = descent_direction(d, g);
    double dir_norm = 0.0;
    for (double v : dir) dir_norm = std::max(dir_norm, std::abs(v));
    if (dir_norm < 1e-14) {
      converged = true;
      break;
    }

    bool accepted = false;
    std::vector<double> d_new;
    DualSolution sol_new;
    for (double step = opts.initial_step; step >= opts.min_step; step *= 0.5) {
      std::vector<double> trial(nk);
      for (std::size_t m = 0; m < nk; ++m) trial[m] = d[m] + step * dir[m];
      d_new = project_simplex(trial);
      double slope = 0.0;
      for (std::size_t m = 0; m < nk; ++m) slope += g[m] * (d_new[m] - d[m]);
      sol_new = solve_dual(combine_grams(grams, d_new), y, C, opts.dual, &sol.alpha);
      if (sol_new.objective <= J + opts.armijo * slope && sol_new.objective <= J) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      converged = true;  // no step along the reduced gradient lowers J
      break;
    }
    const double change = J - sol_new.objective;
    d = std::move(d_new);
    sol = std::move(sol_new);
    J = sol.objective;
    if (trace) trace->iterates.push_back({d, J});
    if (std::abs(change) < opts.tolerance) converged = true;
  }

  MklModel model;
  model.kernels = kernels;
  model.d = d;
  model.C = C;
  model.bias = sol.bias;
  model.objective = J;
  model.iterations = iter;
  model.converged = converged && sol.converged;
  model.feature_weights = feature_weights.empty() ? std::vector<double>(static_cast<std::size_t>(x.cols()), 1.0)
                                                  : std::vector<double>(feature_weights.begin(), feature_weights.end());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (sol.alpha[i] <= 0.0) continue;
    SupportVector sv;
    sv.x.resize(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index j = 0; j < x.cols(); ++j) sv.x[static_cast<std::size_t>(j)] = x(i, j);
    sv.y = y[static_cast<std::size_t>(i)];
    sv.alpha = sol.alpha[i];
    model.support.push_back(std::move(sv));
  }
  return model;
}

MklModel svm_train(const Eigen::MatrixXd& x, std::span<const int> y, const KernelSpec& kernel, double C,
                   const DualOptions& opts) {
  MklOptions mo;
  mo.dual = opts;
  return simple_mkl_train(x, y, {kernel}, C, mo);
}

double decision_score(const MklModel& model, std::span<const double> x) {
  auto z = model.normalizer.apply(x);
  if (z.size() != model.feature_weights.size()) throw ConfigError("decision_score: dimension mismatch");
  for (std::size_t j = 0; j < z.size(); ++j) z[j] *= model.feature_weights[j];

  std::vector<double> sw(z.size());
  double score = model.bias;
  for (const auto& sv : model.support) {
    for (std::size_t j = 0; j < sw.size(); ++j) sw[j] = sv.x[j] * model.feature_weights[j];
    double k = 0.0;
    for (std::size_t m = 0; m < model.kernels.size(); ++m) {
      if (model.d[m] == 0.0) continue;
      k += model.d[m] * kernel_eval(model.kernels[m], sw, z);
    }
    score += sv.alpha * sv.y * k;
  }
  return score;
}

double decision_score(const MklModel& model, const FeatureVector& x) {
  return decision_score(model, std::span<const double>(x.x));
}

Label classify(const MklModel& model, std::span<const double> x) {
  return decision_score(model, x) >= 0.0 ? Label::kNormal : Label::kAttack;
}

Label classify(const MklModel& model, const FeatureVector& x) {
  return classify(model, std::span<const double>(x.x));
}

Eigen::MatrixXd to_matrix(std::span<const FeatureVector> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kFeatureDim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < kFeatureDim; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i].x[j];
    }
  }
  return m;
}

Eigen::MatrixXd to_matrix(std::span<const LabeledSample> samples) {
  std::vector<FeatureVector> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back(s.features);
  return to_matrix(rows);
}

std::vector<int> to_labels(std::span<const LabeledSample> samples) {
  std::vector<int> y;
  y.reserve(samples.size());
  for (const auto& s : samples) y.push_back(to_int(s.label));
  return y;
}

}  // namespace mkldd
