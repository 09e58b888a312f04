#include "mkldd/kernels.hpp"

#include <cmath>

#include "mkldd/error.hpp"
#include "text_util.hpp"

namespace mkldd {

KernelSpec KernelSpec::gaussian(double bandwidth) {
  KernelSpec k;
  k.kind = KernelKind::kGaussian;
  k.bandwidth = bandwidth;
  k.validate();
  return k;
}

KernelSpec KernelSpec::polynomial(int degree, double coef0) {
  KernelSpec k;
  k.kind = KernelKind::kPolynomial;
  k.degree = degree;
  k.coef0 = coef0;
  k.validate();
  return k;
}

KernelSpec KernelSpec::linear() { return KernelSpec{}; }

void KernelSpec::validate() const {
  if (kind == KernelKind::kGaussian && !(bandwidth > 0.0 && std::isfinite(bandwidth))) {
    throw ConfigError("gaussian bandwidth must be positive");
  }
  if (kind == KernelKind::kPolynomial && degree < 1) {
    throw ConfigError("polynomial degree must be at least 1");
  }
}

std::string KernelSpec::to_string() const {
  switch (kind) {
    case KernelKind::kGaussian:
      return "gaussian:" + detail::format_double(bandwidth);
    case KernelKind::kPolynomial:
      return "poly:" + std::to_string(degree) + ":" + detail::format_double(coef0);
    case KernelKind::kLinear:
      break;
  }
  return "linear";
}

KernelSpec KernelSpec::parse(const std::string& text) {
  const auto parts = detail::split(detail::trim(text), ':');
  const auto bad = [&] { return ConfigError("invalid kernel spec '" + text + "'"); };
  if (parts[0] == "linear" && parts.size() == 1) return linear();
  if (parts[0] == "gaussian" && parts.size() == 2) {
    const auto bw = detail::parse_double(parts[1]);
    if (!bw) throw bad();
    return gaussian(*bw);
  }
  if ((parts[0] == "poly" || parts[0] == "polynomial") && parts.size() == 3) {
    const auto deg = detail::parse_int<int>(parts[1]);
    const auto c0 = detail::parse_double(parts[2]);
    if (!deg || !c0) throw bad();
    return polynomial(*deg, *c0);
  }
  throw bad();
}

std::vector<KernelSpec> default_kernel_bank() {
  return {KernelSpec::gaussian(0.5), KernelSpec::gaussian(2.0), KernelSpec::polynomial(2, 1.0),
          KernelSpec::polynomial(3, 1.0)};
}

namespace {

template <class A, class B>
double eval_rows(const KernelSpec& spec, const A& x, const B& y) {
  switch (spec.kind) {
    case KernelKind::kGaussian:
      return std::exp(-(x - y).squaredNorm() / (2.0 * spec.bandwidth * spec.bandwidth));
    case KernelKind::kPolynomial:
      return std::pow(x.dot(y) + spec.coef0, spec.degree);
    case KernelKind::kLinear:
      break;
  }
  return x.dot(y);
}

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("kernel_eval: dimension mismatch");
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  return eval_rows(spec, xv, yv);
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& samples) {
  const auto n = samples.rows();
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = eval_rows(spec, samples.row(i), samples.row(j));
      g(j, i) = g(i, j);
    }
  }
  return g;
}

Eigen::MatrixXd cross_kernel(const KernelSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols()) throw ConfigError("cross_kernel: dimension mismatch");
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) k(i, j) = eval_rows(spec, a.row(i), b.row(j));
  }
  return k;
}

Eigen::MatrixXd combine_grams(std::span<const Eigen::MatrixXd> grams, std::span<const double> d) {
  if (grams.empty() || grams.size() != d.size()) {
    throw ConfigError("combine_grams: need one weight per kernel");
  }
  Eigen::MatrixXd k = d[0] * grams[0];
  for (std::size_t m = 1; m < grams.size(); ++m) k += d[m] * grams[m];
  return k;
}

Eigen::MatrixXd combined_gram(std::span<const KernelSpec> kernels, std::span<const double> d,
                              const Eigen::MatrixXd& samples) {
  std::vector<Eigen::MatrixXd> grams;
  grams.reserve(kernels.size());
  for (const auto& k : kernels) grams.push_back(gram_matrix(k, samples));
  return combine_grams(grams, d);
}

}  // namespace mkldd
