// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "mkldd/adaptive.hpp"
#include "mkldd/cli.hpp"
#include "mkldd/config.hpp"
#include "mkldd/ensemble.hpp"
#include "mkldd/evaluation.hpp"
#include "mkldd/model_io.hpp"
#include "mkldd/pipeline.hpp"
#include "mkldd/rng.hpp"
#include "mkldd/simple_mkl.hpp"
#include "mkldd/svm_dual.hpp"
#include "mkldd/synth.hpp"
#include "oracles/feature_oracle.hpp"
#include "oracles/qp_oracle.hpp"
#include "oracles/random_windows.hpp"
#include "oracles/reference_svm.hpp"
#include "oracles/rule_oracle.hpp"

using namespace mkldd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1 -------------------------------------------------------------------------
Outcome feature_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  const double mixes[] = {0.125, 0.25, 0.5, 0.75};
  int windows = 0, mismatches = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    FeatureThresholds th;
    if (trial % 2 == 1) {
      th.theta1 = mixes[rng.below(4)];
      th.theta2 = mixes[rng.below(4)];
      for (double* t : {&th.theta3, &th.theta4, &th.theta5, &th.theta6, &th.theta7, &th.theta8, &th.theta9}) {
        *t = static_cast<double>(rng.below(5));
      }
      th.packet_rule = rng.below(2) ? PacketWeightRule::kAsWritten : PacketWeightRule::kShVariant;
    }
    const auto ps = oracle::random_window(rng, 30, 5, 5);
    const auto want = oracle::features(ps, th);
    const auto got = compute_features(FlowWindow{0.0, th.delta_t, ps}, th);
    ++windows;
    for (std::size_t j = 0; j < kFeatureDim; ++j) mismatches += got.x[j] != want[j];
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs <= 30.0,
          std::to_string(windows) + " windows, " + std::to_string(mismatches) + " mismatches" + fmt(", %.2f s", secs)};
}

// 2 -------------------------------------------------------------------------
Outcome dual_solver() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(202);
  const std::vector<KernelSpec> kernels = {KernelSpec::linear(), KernelSpec::gaussian(0.5),
                                           KernelSpec::polynomial(2, 1.0), KernelSpec::polynomial(3, 1.0)};
  double worst_rel = 0.0, worst_kkt = 0.0;
  int problems = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    Eigen::MatrixXd x(n, 3);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) x(i, j) = 2.0 * rng.uniform() - 1.0;
    }
    std::vector<int> y(n);
    for (auto& v : y) v = rng.below(2) ? 1 : -1;
    y[0] = 1;
    y[1] = -1;
    const double C = 0.05 + 10.0 * rng.uniform();
    const auto K = gram_matrix(kernels[trial % kernels.size()], x);
    const auto sol = solve_dual(K, y, C);
    const auto ref = oracle::solve_dual_enumerate(K, y, C);
    if (!ref.found) return {false, "oracle found no feasible point"};
    ++problems;
    worst_rel = std::max(worst_rel, std::abs(sol.objective - ref.objective) / std::max(1e-12, std::abs(ref.objective)));
    double eq = 0.0;
    for (int i = 0; i < n; ++i) {
      worst_kkt = std::max({worst_kkt, -sol.alpha[i], sol.alpha[i] - C});
      eq += y[i] * sol.alpha[i];
    }
    worst_kkt = std::max(worst_kkt, std::abs(eq));
  }
  const double secs = seconds_since(t0);
  return {worst_rel <= 1e-4 && worst_kkt <= 1e-8 && secs <= 60.0,
          std::to_string(problems) + " problems, max rel objective gap " + fmt("%.2e, max constraint violation %.2e, %.2f s", worst_rel, worst_kkt, secs)};
}

// 3 -------------------------------------------------------------------------
void blobs(Rng& rng, int n, Eigen::MatrixXd& x, std::vector<int>& y, double spread) {
  x.resize(n, 2);
  y.resize(n);
  for (int i = 0; i < n; ++i) {
    y[i] = i % 2 == 0 ? 1 : -1;
    const double c = y[i] > 0 ? 0.35 : 0.65;
    x(i, 0) = c + spread * (2.0 * rng.uniform() - 1.0);
    x(i, 1) = c + spread * (2.0 * rng.uniform() - 1.0);
  }
}

Outcome mkl_reductions() {
  Rng rng(303);
  Eigen::MatrixXd x;
  std::vector<int> y;
  blobs(rng, 40, x, y, 0.28);

  // (a) one kernel vs an independently trained SVM
  const auto spec = KernelSpec::gaussian(0.3);
  const auto kf = [&](const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    return kernel_eval(spec, std::vector<double>(a.data(), a.data() + a.size()),
                       std::vector<double>(b.data(), b.data() + b.size()));
  };
  const auto model = simple_mkl_train(x, y, {spec}, 1.0);
  const auto ref = oracle::train_reference_svm(x, y, 1.0, kf);
  int agree = 0, total = 0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 10; ++j) {
      Eigen::RowVectorXd z(2);
      z << i / 19.0, j / 9.0;
      const Label a = classify(model, std::vector<double>{z[0], z[1]});
      const Label b = oracle::reference_score(ref, z, kf) >= 0.0 ? Label::kNormal : Label::kAttack;
      agree += a == b;
      ++total;
    }
  }
  const double agreement = static_cast<double>(agree) / total;

  // (b) simplex at every iterate
  double worst_sum = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd xt;
    std::vector<int> yt;
    blobs(rng, 40, xt, yt, 0.35);
    MklTrace trace;
    simple_mkl_train(xt, yt, default_kernel_bank(), 1.0, {}, {}, &trace);
    for (const auto& it : trace.iterates) {
      double s = 0.0;
      for (double v : it.d) s += v;
      worst_sum = std::max(worst_sum, std::abs(s - 1.0));
    }
  }

  // (c) duplicated kernel
  const auto k = KernelSpec::polynomial(2, 1.0);
  const auto single = simple_mkl_train(x, y, {k}, 1.0);
  const auto doubled = simple_mkl_train(x, y, {k, k}, 1.0);
  double worst_dup = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> z = {rng.uniform(), rng.uniform()};
    worst_dup = std::max(worst_dup, std::abs(decision_score(single, z) - decision_score(doubled, z)));
  }
  return {agreement >= 0.99 && worst_sum <= 1e-10 && worst_dup <= 1e-6,
          fmt("grid agreement %.1f%% of 200, max |sum d - 1| %.1e, duplicated-kernel max score gap %.1e",
              100.0 * agreement, worst_sum, worst_dup)};
}

// 4 -------------------------------------------------------------------------
Outcome gradient_checks() {
  Rng rng(404);
  double worst_ms = 0.0;
  int draws = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 6 + static_cast<int>(rng.below(30));
    Eigen::MatrixXd x(n, 5);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = i % 2 ? -1 : 1;
      for (int j = 0; j < 5; ++j) x(i, j) = rng.uniform() + (y[i] > 0 ? 0.0 : 0.3);
    }
    std::vector<double> w(5);
    for (auto& v : w) v = 0.1 + 2.0 * rng.uniform();
    const auto stats = class_stats(x, y);
    const auto gm = grad_M(w, stats);
    const auto gs = grad_S(w, stats);
    const double h = 1e-6;
    for (int j = 0; j < 5; ++j) {
      auto up = w, dn = w;
      up[j] += h;
      dn[j] -= h;
      const double fm = (compute_M(up, stats) - compute_M(dn, stats)) / (2 * h);
      const double fs = (compute_S(up, x, y, stats) - compute_S(dn, x, y, stats)) / (2 * h);
      worst_ms = std::max(worst_ms, std::abs(fm - gm[j]) / std::max(1e-3, std::abs(gm[j])));
      worst_ms = std::max(worst_ms, std::abs(fs - gs[j]) / std::max(1e-3, std::abs(gs[j])));
    }
    ++draws;
  }

  double worst_d = 0.0;
  DualOptions tight;
  tight.tolerance = 1e-12;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd x;
    std::vector<int> y;
    blobs(rng, 16, x, y, 0.35);
    std::vector<Eigen::MatrixXd> grams;
    for (const auto& k : default_kernel_bank()) grams.push_back(gram_matrix(k, x));
    std::vector<double> d(grams.size());
    for (auto& v : d) v = 0.1 + rng.uniform();
    const double C = 0.5 + rng.uniform();
    const auto J = [&](const std::vector<double>& dd) {
      return solve_dual(combine_grams(grams, dd), y, C, tight).objective;
    };
    const auto sol = solve_dual(combine_grams(grams, d), y, C, tight);
    const auto g = objective_gradient(grams, y, sol.alpha);
    const double h = 1e-5;
    for (std::size_t m = 0; m < d.size(); ++m) {
      auto up = d, dn = d;
      up[m] += h;
      dn[m] -= h;
      const double fd = (J(up) - J(dn)) / (2 * h);
      worst_d = std::max(worst_d, std::abs(fd - g[m]) / std::max(1.0, std::abs(g[m])));
    }
  }
  return {worst_ms <= 1e-4 && worst_d <= 1e-4,
          std::to_string(draws) + fmt(" (w, data) draws, max rel error M/S %.1e, dJ/dd %.1e", worst_ms, worst_d)};
}

// 5 -------------------------------------------------------------------------
Outcome update_arithmetic() {
  Rng rng(505);
  double worst = 0.0;
  int floors = 0, floor_errors = 0, cases = 0;
  const auto check = [&](const std::vector<double>& w, const std::vector<double>& gm, const std::vector<double>& gs,
                         const WeightAdaptConfig& cfg) {
    const auto got = update_weights(w, gm, gs, cfg);
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double raw = w[j] + 2.0 * cfg.lr1 * gm[j] - 2.0 * cfg.lr2 * gs[j];
      const bool floored = got[j] == kWeightFloor && raw != kWeightFloor;
      if (raw <= 0.0) {
        ++floors;
        floor_errors += !floored;
      } else {
        floor_errors += floored;
        worst = std::max(worst, std::abs(got[j] - raw));
      }
    }
    ++cases;
  };
  for (int t = 0; t < 20; ++t) {
    WeightAdaptConfig cfg;
    cfg.lr1 = 1e-3 * (1.0 + rng.uniform());
    cfg.lr2 = 1e-2 * (1.0 + rng.uniform());
    std::vector<double> w(5), gm(5), gs(5);
    for (int j = 0; j < 5; ++j) {
      w[j] = 2.0 * rng.uniform();
      gm[j] = 10.0 * rng.uniform();
      gs[j] = 100.0 * rng.uniform();
    }
    check(w, gm, gs, cfg);
  }
  // Boundary cases: raw exactly zero, and a positive raw smaller than the floor.
  WeightAdaptConfig edge;
  edge.lr1 = 0.25;
  edge.lr2 = 0.25;
  check({1.0, 1e-9, 0.5}, {0.0, 0.0, 0.0}, {2.0, 0.0, 1.0}, edge);
  return {worst <= 1e-12 && floor_errors == 0 && floors > 0,
          std::to_string(cases) + " cases, max abs error " + fmt("%.1e, ", worst) + std::to_string(floors) +
              " floored entries, " + std::to_string(floor_errors) + " floor mismatches"};
}

// 6 -------------------------------------------------------------------------
Outcome rule_table() {
  std::size_t positions = 0, streams = 0, mismatches = 0;
  std::string first;
  for (int n = 1; n <= 4; ++n) {
    for (int len = 0; len <= 8; ++len) {
      const auto r = exhaustive_rule_check(n, len, oracle::arbitrate_at);
      positions += r.positions;
      streams += r.streams;
      mismatches += r.mismatches;
      if (first.empty()) first = r.first_mismatch;
    }
  }
  // Case (3): M normal, S attack is judged attack whatever follows.
  const auto v = arbitrate(std::vector<Label>{Label::kNormal, Label::kNormal},
                           std::vector<Label>{Label::kAttack, Label::kNormal}, DetectorConfig{});
  const bool case3 = v[0].label == Label::kAttack && v[0].rule == VerdictRule::kSOverrides;
  return {mismatches == 0 && case3,
          std::to_string(streams) + " stream pairs, " + std::to_string(positions) + " verdicts, " +
              std::to_string(mismatches) + " mismatches" + (first.empty() ? "" : " (" + first + ")") +
              (case3 ? ", S-attack override holds" : ", S-attack override broken")};
}

// 7 -------------------------------------------------------------------------
Outcome metrics_cell() {
  std::vector<Label> pred, truth;
  const auto push = [&](Label t, Label p, int k) {
    for (int i = 0; i < k; ++i) {
      truth.push_back(t);
      pred.push_back(p);
    }
  };
  push(Label::kAttack, Label::kAttack, 220);
  push(Label::kAttack, Label::kNormal, 60);
  push(Label::kNormal, Label::kNormal, 211);
  const auto r = metrics(pred, truth);
  const bool ok = r.dr && r.fr && r.er && std::abs(*r.dr - 78.57) <= 0.01 && std::abs(*r.er - 12.22) <= 0.01 &&
                  std::abs(*r.fr - 0.01) <= 0.01;
  return {ok, "DR " + format_rate(r.dr) + " FR " + format_rate(r.fr) + " ER " + format_rate(r.er) +
                  " (expected 78.57 / 0.01 / 12.22, tolerance 0.01)"};
}

// 8 and 10 share a trained pipeline -----------------------------------------
struct Trained {
  TrainedPipeline pipeline;
  std::vector<LabeledSample> train, test;
  double train_secs = 0.0;
};

const Trained& trained() {
  static const Trained t = [] {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg;  // shipped defaults
    const std::uint64_t seed = 2024;
    const auto packets = synth_traffic(cfg.synth, Rng::derive(seed, 0));
    const auto samples = label_by_onset(extract_series(packets, cfg.thresholds), cfg.synth.attack_start);
    Trained out;
    std::tie(out.train, out.test) = split_samples(samples, cfg.train_fraction, Rng::derive(seed, 1));
    out.pipeline = train_pipeline(out.train, cfg.pipeline);
    out.train_secs = seconds_since(t0);
    return out;
  }();
  return t;
}

Outcome stability() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& t = trained();
  const std::size_t windows = t.train.size() + t.test.size();
  const GridSpec base{"base", PerturbMode::kBoth, {{1.0, 1.0}}};
  const GridSpec near{"near", PerturbMode::kBoth, {{0.9, 1.1}}};
  const auto r0 = run_experiment_grid(t.pipeline, t.test, base, 2024);
  const auto r1 = run_experiment_grid(t.pipeline, t.test, near, 2024, PerturbGranularity::kPerSample, 1003);
  const auto er = [](const std::vector<ExperimentRow>& rows, Method m) {
    for (const auto& r : rows) {
      if (r.method == m) return r.report.er.value_or(100.0);
    }
    return 100.0;
  };
  const double e0 = er(r0, Method::kEnsemble), e1 = er(r1, Method::kEnsemble);
  const double s0 = er(r0, Method::kSimpleMkl), s1 = er(r1, Method::kSimpleMkl);
  const double secs = t.train_secs + seconds_since(t0);
  const bool ok = windows >= 120 && std::abs(e1 - e0) <= 2.0 && e0 <= s0 && e1 <= s1 && secs <= 300.0;
  return {ok, std::to_string(windows) + " windows; ensemble ER " + fmt("%.2f -> %.2f", e0, e1) +
                  fmt(" under [0.9,1.1]; SimpleMKL ER %.2f -> %.2f; %.1f s", s0, s1, secs)};
}

// 9 -------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / ("mkldd_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(root);
  std::vector<std::string> outputs;
  for (const char* name : {"run_a", "run_b"}) {
    const auto dir = (root / name).string();
    std::vector<std::string> args = {"mkldd", "--seed", "77", "experiment", "--out-dir", dir};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    const int rc = run_cli(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old);
    if (rc != 0) return {false, "experiment exited with " + std::to_string(rc)};
    outputs.push_back(slurp(fs::path(dir) / "results.csv"));
  }
  fs::remove_all(root);
  const bool same = outputs[0] == outputs[1] && !outputs[0].empty();
  const auto lines = std::count(outputs[0].begin(), outputs[0].end(), '\n');
  return {same, std::to_string(lines) + " lines of results.csv, " + (same ? "byte-identical" : "different")};
}

// 10 ------------------------------------------------------------------------
Outcome round_trip() {
  const auto& t = trained();
  const auto root = fs::temp_directory_path() / ("mkldd_models_" + std::to_string(::getpid()));
  fs::create_directories(root);
  double worst = 0.0;
  std::size_t scored = 0;
  for (const auto* model : {&t.pipeline.m_smkl.model, &t.pipeline.s_smkl.model}) {
    const auto path = (root / "model.json").string();
    save_model(path, *model);
    const auto back = load_model(path);
    for (const auto* set : {&t.train, &t.test}) {
      for (const auto& s : *set) {
        worst = std::max(worst, std::abs(decision_score(*model, s.features) - decision_score(back, s.features)));
        ++scored;
      }
    }
  }
  fs::remove_all(root);
  return {worst <= 1e-12, std::to_string(scored) + fmt(" scores, max difference %.1e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"feature oracle equivalence", feature_oracle},
      {"dual solver vs exhaustive QP", dual_solver},
      {"SimpleMKL reductions", mkl_reductions},
      {"gradient checks", gradient_checks},
      {"weight update arithmetic", update_arithmetic},
      {"ensemble rule table", rule_table},
      {"metrics arithmetic", metrics_cell},
      {"synthetic stability and ordering", stability},
      {"experiment determinism", determinism},
      {"model serialization round trip", round_trip},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
