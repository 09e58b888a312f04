#include <cmath>

#include "doctest.h"
#include "mkldd/error.hpp"
#include "mkldd/kernels.hpp"
#include "mkldd/rng.hpp"
#include "mkldd/svm_dual.hpp"
#include "oracles/qp_oracle.hpp"

using namespace mkldd;

namespace {

Eigen::MatrixXd random_points(Rng& rng, int n, int dim) {
  Eigen::MatrixXd x(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) x(i, j) = 2.0 * rng.uniform() - 1.0;
  }
  return x;
}

std::vector<int> random_labels(Rng& rng, int n) {
  std::vector<int> y(n);
  for (auto& v : y) v = rng.below(2) ? 1 : -1;
  y[0] = 1;
  y[1] = -1;
  return y;
}

}  // namespace

TEST_CASE("kernel values") {
  const std::vector<double> a = {1.0, 2.0}, b = {0.0, 1.0};
  CHECK(kernel_eval(KernelSpec::linear(), a, b) == 2.0);
  CHECK(kernel_eval(KernelSpec::polynomial(2, 1.0), a, b) == 9.0);
  CHECK(kernel_eval(KernelSpec::gaussian(1.0), a, b) == doctest::Approx(std::exp(-1.0)));
  CHECK(kernel_eval(KernelSpec::gaussian(0.5), a, a) == 1.0);
  CHECK_THROWS_AS(kernel_eval(KernelSpec::linear(), a, std::vector<double>{1.0}), ConfigError);
}

TEST_CASE("kernel spec text form round trips") {
  for (const auto& k : default_kernel_bank()) CHECK(KernelSpec::parse(k.to_string()) == k);
  CHECK(KernelSpec::parse("linear") == KernelSpec::linear());
  CHECK(KernelSpec::parse("gaussian:0.1").bandwidth == 0.1);
  CHECK_THROWS_AS(KernelSpec::parse("gaussian:-1"), ConfigError);
  CHECK_THROWS_AS(KernelSpec::parse("rbf:1"), ConfigError);
  CHECK_THROWS_AS(KernelSpec::parse("poly:0:1"), ConfigError);
}

TEST_CASE("gram matrices are symmetric and combine linearly") {
  Rng rng(1);
  const auto x = random_points(rng, 7, 3);
  const auto bank = default_kernel_bank();
  std::vector<Eigen::MatrixXd> grams;
  for (const auto& k : bank) {
    grams.push_back(gram_matrix(k, x));
    CHECK((grams.back() - grams.back().transpose()).norm() == 0.0);
    CHECK((cross_kernel(k, x, x) - grams.back()).norm() < 1e-12);
  }
  const std::vector<double> d = {0.1, 0.2, 0.3, 0.4};
  const auto combined = combine_grams(grams, d);
  CHECK((combined - combined_gram(bank, d, x)).norm() < 1e-12);
}

TEST_CASE("dual solver matches exhaustive face enumeration") {
  Rng rng(2024);
  const std::vector<KernelSpec> kernels = {KernelSpec::linear(), KernelSpec::gaussian(0.7),
                                           KernelSpec::polynomial(2, 1.0)};
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const auto x = random_points(rng, n, 2);
    const auto y = random_labels(rng, n);
    const double C = 0.1 + 5.0 * rng.uniform();
    const auto K = gram_matrix(kernels[trial % kernels.size()], x);
    const auto sol = solve_dual(K, y, C);
    const auto ref = oracle::solve_dual_enumerate(K, y, C);
    REQUIRE(ref.found);
    INFO("trial " << trial);
    CHECK(sol.converged);
    CHECK(std::abs(sol.objective - ref.objective) <= 1e-4 * std::max(1.0, std::abs(ref.objective)));
    double eq = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(sol.alpha[i] >= -1e-8);
      CHECK(sol.alpha[i] <= C + 1e-8);
      eq += y[i] * sol.alpha[i];
    }
    CHECK(std::abs(eq) <= 1e-8);
    CHECK(sol.objective == doctest::Approx(dual_objective(K, y, sol.alpha)).epsilon(1e-12));
  }
}

TEST_CASE("separable pair: margin and bias") {
  // Points at -1 and +1 on a line, linear kernel, large C: alpha = 0.5, b = 0.
  Eigen::MatrixXd x(2, 1);
  x << 1.0, -1.0;
  const std::vector<int> y = {1, -1};
  const auto sol = solve_dual(gram_matrix(KernelSpec::linear(), x), y, 10.0);
  CHECK(sol.alpha[0] == doctest::Approx(0.5));
  CHECK(sol.alpha[1] == doctest::Approx(0.5));
  CHECK(sol.bias == doctest::Approx(0.0));
  CHECK(sol.objective == doctest::Approx(0.5));
}

TEST_CASE("dual solver is bit reproducible and honors warm starts") {
  Rng rng(5);
  const auto x = random_points(rng, 30, 3);
  const auto y = random_labels(rng, 30);
  const auto K = gram_matrix(KernelSpec::gaussian(0.5), x);
  const auto a = solve_dual(K, y, 1.0);
  const auto b = solve_dual(K, y, 1.0);
  CHECK(a.alpha == b.alpha);
  CHECK(a.bias == b.bias);
  const auto warm = solve_dual(K, y, 1.0, {}, &a.alpha);
  CHECK(warm.objective == doctest::Approx(a.objective).epsilon(1e-9));
  CHECK(warm.iterations <= 2);
}

TEST_CASE("dual solver input errors") {
  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(solve_dual(K, std::vector<int>{1, 1, 1}, 1.0), DataError);
  CHECK_THROWS_AS(solve_dual(K, std::vector<int>{1, 0, -1}, 1.0), DataError);
}
