#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mkldd/flow.hpp"

namespace mkldd {

/// How the packet-weight term of MFF combines Weight_SD and Weight_SH.
///
/// kAsWritten:  flag(Weight_SD) * Weight_SD + Weight_SD
/// kShVariant:  flag(Weight_SH) * Weight_SD + Weight_SH
///
/// The formula as written repeats Weight_SD, which makes the flag term inert;
/// the variant is the most plausible intended reading. Neither is assumed
/// correct, so both are selectable.
enum class PacketWeightRule { kAsWritten, kShVariant };

/// Weights and rate thresholds of the five features. Every threshold gate
/// keeps a count x when x / delta_t > theta and zeroes it otherwise.
struct FeatureThresholds {
  double theta1 = 0.5;  // ACD port/packet mix, in (0, 1)
  double theta2 = 0.5;  // FFV packet/port mix, in [0, 1]
  double theta3 = 3.0;  // FFV per-source packets
  double theta4 = 3.0;  // FFV destination ports
  double theta5 = 3.0;  // IBF half-flow ports
  double theta6 = 3.0;  // MFF SH packets
  double theta7 = 3.0;  // MFF SD packets
  double theta8 = 3.0;  // MFF SH/DH ports
  double theta9 = 3.0;  // HIAD destination ports
  double delta_t = 1.0;  // seconds
  PacketWeightRule packet_rule = PacketWeightRule::kAsWritten;

  /// Throws ConfigError when any bound is violated.
  void validate() const;
  bool operator==(const FeatureThresholds&) const = default;
};

inline constexpr std::size_t kFeatureDim = 5;

/// One window's sample, in the fixed order (ACD, IBF, MFF, HIAD, FFV).
struct FeatureVector {
  std::array<double, kFeatureDim> x{};
  double window_start = 0.0;

  double acd() const { return x[0]; }
  double ibf() const { return x[1]; }
  double mff() const { return x[2]; }
  double hiad() const { return x[3]; }
  double ffv() const { return x[4]; }

  bool operator==(const FeatureVector&) const = default;
};

/// Normal traffic is the positive class.
enum class Label : int { kNormal = 1, kAttack = -1 };

inline int to_int(Label l) { return static_cast<int>(l); }
Label label_from_int(int v);  // throws DataError unless v is +1 or -1
const char* label_name(Label l);

struct LabeledSample {
  FeatureVector features;
  Label label = Label::kNormal;
};

// ---------------------------------------------------------------------------
// Per-class counts, the raw material of all five features.

struct AcsClass {
  std::size_t ports = 0;
  std::size_t packets = 0;
};

/// Destination reached by at least two distinct sources.
struct SddClass {
  std::vector<std::size_t> packets_per_source;  // one entry per distinct source
  std::size_t ports = 0;
};

/// SH packets grouped by destination.
struct HsdClass {
  std::size_t sources = 0;  // hn
  std::size_t ports = 0;
};

struct ClassCounts {
  std::vector<AcsClass> acs;            // SD classes surviving the multi-destination deletion
  std::vector<SddClass> sdd;            // destinations surviving the unique-source deletion
  std::vector<std::size_t> sh_ports;    // Port(SH_i); size() is S
  std::vector<std::size_t> sh_packets;  // Packet(SH_i)
  std::vector<std::size_t> dh_ports;    // Port(DH_i); size() is D
  std::vector<std::size_t> sd_packets;  // Packet(SD_i) over every SD class
  std::size_t if_count = 0;             // M, number of IF keys
  std::vector<HsdClass> hsd;
};

ClassCounts count_classes(const ClassPartition& part);

/// Every intermediate quantity of the five features, gated where the
/// definitions gate.
struct FeatureIntermediates {
  std::vector<double> w_acs;
  std::vector<double> cip;
  double ibf_sh_ports = 0.0;  // sum of over(Port(SH_i))
  double ibf_dh_ports = 0.0;  // sum of over(Port(DH_i))
  double weight_sh = 0.0;
  double weight_sd = 0.0;
  double weight_packet = 0.0;
  double weight_port = 0.0;
  std::vector<double> hiad_terms;  // hn_i + weight(Port(HSD_i))
};

FeatureIntermediates evaluate_intermediates(const ClassCounts& counts, const FeatureThresholds& th);

/// Hard threshold gate: x if x / delta_t > theta, else 0.
inline double rate_gate(double x, double theta, double delta_t) {
  return x / delta_t > theta ? x : 0.0;
}

double acd(const ClassCounts& c, const FeatureThresholds& th);
double ffv(const ClassCounts& c, const FeatureThresholds& th);
double ibf(const ClassCounts& c, const FeatureThresholds& th);
double mff(const ClassCounts& c, const FeatureThresholds& th);
double hiad(const ClassCounts& c, const FeatureThresholds& th);

double acd(const ClassPartition& p, const FeatureThresholds& th);
double ffv(const ClassPartition& p, const FeatureThresholds& th);
double ibf(const ClassPartition& p, const FeatureThresholds& th);
double mff(const ClassPartition& p, const FeatureThresholds& th);
double hiad(const ClassPartition& p, const FeatureThresholds& th);

FeatureVector compute_features(const FlowWindow& window, const FeatureThresholds& th);

/// One feature vector per window of `packets`, in time order.
std::vector<FeatureVector> extract_series(std::span<const PacketRecord> packets,
                                          const FeatureThresholds& th,
                                          std::vector<std::string>* diagnostics = nullptr);

/// Label each vector by window start: windows starting at or after
/// `attack_start` are attacks.
std::vector<LabeledSample> label_by_onset(std::span<const FeatureVector> series, double attack_start);

// ---------------------------------------------------------------------------

/// Per-dimension min-max scaling fitted on a training set. Values outside
/// the training range clamp to [0, 1]; a constant dimension maps to 0.
class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(std::vector<double> lo, std::vector<double> hi);

  static Normalizer fit(std::span<const FeatureVector> train);

  bool is_identity() const { return lo_.empty(); }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }

  FeatureVector apply(const FeatureVector& v) const;
  std::vector<double> apply(std::span<const double> v) const;

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

}  // namespace mkldd
