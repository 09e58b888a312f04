#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mkldd/features.hpp"

namespace mkldd {

/// Confusion counts with normal as the positive class:
///   tp normal marked normal, fp normal marked attack,
///   tn attack marked attack, fn attack marked normal.
/// Rates are percentages; a rate whose class is absent stays empty.
struct EvalReport {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::optional<double> dr;  // 100 tn / (tn + fn)
  std::optional<double> fr;  // 100 fp / (tp + fp)
  std::optional<double> er;  // 100 (fn + fp) / total
};

EvalReport metrics(std::span<const Label> predicted, std::span<const Label> truth);

/// Two decimals, or "undefined".
std::string format_rate(const std::optional<double>& rate);

enum class PerturbMode { kBoth, kAttackOnly, kNormalOnly };
const char* perturb_mode_name(PerturbMode m);
PerturbMode parse_perturb_mode(const std::string& text);

/// kPerSample draws one multiplier per selected sample and applies it to
/// all five features; kPerValue draws one per feature value.
enum class PerturbGranularity { kPerSample, kPerValue };
const char* granularity_name(PerturbGranularity g);
PerturbGranularity parse_granularity(const std::string& text);

struct PerturbSpec {
  PerturbMode mode = PerturbMode::kBoth;
  double lo = 1.0;
  double hi = 1.0;
  std::uint64_t seed = 0;
  PerturbGranularity granularity = PerturbGranularity::kPerSample;
  void validate() const;
};

/// Multiplies the selected samples' features by uniform draws from
/// [lo, hi). Unselected samples are copied untouched.
std::vector<LabeledSample> perturb(std::span<const LabeledSample> series, const PerturbSpec& spec);

}  // namespace mkldd
