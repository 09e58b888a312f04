#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mkldd/features.hpp"
#include "mkldd/simple_mkl.hpp"

namespace mkldd {

/// M-SMKL grows the inter-class mean squared difference M; S-SMKL shrinks
/// the intra-class variance S.
enum class AdaptMode { kMSmkl, kSSmkl };

const char* mode_name(AdaptMode mode);
AdaptMode parse_mode(const std::string& text);  // "m" / "s"

/// Per-dimension class means and sums of squares. Class 1 is normal (+1),
/// class 2 is attack (-1).
struct ClassStats {
  std::vector<double> u1, u2;
  std::size_t n1 = 0, n2 = 0;
  std::vector<double> sum_sq_1, sum_sq_2;
};

ClassStats class_stats(const Eigen::MatrixXd& x, std::span<const int> y);
ClassStats class_stats(std::span<const LabeledSample> samples);

/// M = sum_j [w_j (u1_j - u2_j)]^2
double compute_M(std::span<const double> w, const ClassStats& stats);

/// S = S1 + S2, each the weighted squared deviation of a class from its mean.
double compute_S(std::span<const double> w, const Eigen::MatrixXd& x, std::span<const int> y,
                 const ClassStats& stats);

/// dM/dw_j = 2 w_j (u1_j - u2_j)^2
std::vector<double> grad_M(std::span<const double> w, const ClassStats& stats);

/// dS/dw_j = 2 [w_j (sum x1_j^2 - n1 u1_j^2) + w_j (sum x2_j^2 - n2 u2_j^2)]
std::vector<double> grad_S(std::span<const double> w, const ClassStats& stats);

inline constexpr double kWeightFloor = 1e-8;

struct WeightAdaptConfig {
  double lr1 = 2e-5;  // ascent rate on M
  double lr2 = 2e-3;  // descent rate on S
  // corridor bounds on successive |dM| (M-SMKL) and |dS| (S-SMKL)
  double t1 = 1.002, t2 = 1.0065, t3 = 1.007;
  double t4 = 7.3425, t5 = 7.8340, t6 = 7.8350;
  // lower bounds on the dM/dS ratios
  double p1 = 0.000084, p2 = 0.000001, p3 = 0.000775, p4 = 0.000680;
  // training aborts once M >= sigma1 or S <= sigma2 (disabled by default)
  double sigma1 = std::numeric_limits<double>::infinity();
  double sigma2 = -std::numeric_limits<double>::infinity();
  int max_iter = 500;
  std::vector<double> init_w = std::vector<double>(kFeatureDim, 1.0);

  static WeightAdaptConfig m_defaults();
  static WeightAdaptConfig s_defaults();
  void validate() const;
  bool operator==(const WeightAdaptConfig&) const = default;
};

/// w_j + 2 lr1 dM/dw_j - 2 lr2 dS/dw_j. A non-positive result is replaced
/// by kWeightFloor.
std::vector<double> update_weights(std::span<const double> w, std::span<const double> grad_m,
                                   std::span<const double> grad_s, const WeightAdaptConfig& cfg);

/// Stopping test on the last three history entries (i-1, i, i+1).
///
/// M-SMKL: t1 < |M_{i+1}-M_i| < t2 < |M_i-M_{i-1}| < t3,
///         (M_i-M_{i-1})/(S_i-S_{i-1}) > p1, (M_i-M_{i+1})/(S_i-S_{i+1}) > p2
/// S-SMKL: t4 < |S_i-S_{i-1}| < t5 < |S_{i+1}-S_i| < t6, same ratios against p3, p4.
///
/// A ratio whose denominator is below 1e-12 in magnitude counts as +inf.
/// Fewer than three entries returns false.
bool stop_check(AdaptMode mode, std::span<const double> m_hist, std::span<const double> s_hist,
                const WeightAdaptConfig& cfg);

enum class AdaptStop { kConstraintsMet, kMaxIter, kSigmaBound };
const char* stop_name(AdaptStop s);

struct WeightAdaptState {
  std::vector<double> w;
  std::vector<double> m_hist;
  std::vector<double> s_hist;
  std::vector<double> j_hist;                 // SimpleMKL objective per iteration
  std::vector<std::vector<double>> w_hist;    // weights used in each iteration
  int iter = 0;
};

struct AdaptiveResult {
  MklModel model;  // feature_weights = final w
  WeightAdaptState state;
  AdaptStop stop = AdaptStop::kMaxIter;
  bool converged() const { return stop == AdaptStop::kConstraintsMet; }
};

/// Iterates: weight the samples by w, train SimpleMKL, record M and S on the
/// weighted features, stop on the mode's constraints or max_iter, otherwise
/// step w along the M/S gradients.
AdaptiveResult train_adaptive(const Eigen::MatrixXd& x, std::span<const int> y,
                              const std::vector<KernelSpec>& kernels, double C,
                              const WeightAdaptConfig& cfg, AdaptMode mode, const MklOptions& mkl = {});

/// `iter,M,S,w1,w2,w3,w4,w5,J` per iteration.
void write_telemetry_csv(std::ostream& out, const WeightAdaptState& state);

}  // namespace mkldd
