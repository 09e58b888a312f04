#include "mkldd/evaluation.hpp"

#include <cmath>
#include <cstdio>

#include "mkldd/error.hpp"
#include "mkldd/rng.hpp"

namespace mkldd {

EvalReport metrics(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size()) throw DataError("metrics: prediction/truth length mismatch");
  EvalReport r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pred_normal = predicted[i] == Label::kNormal;
    if (truth[i] == Label::kNormal) {
      ++(pred_normal ? r.tp : r.fp);
    } else {
      ++(pred_normal ? r.fn : r.tn);
    }
  }
  const auto pct = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
  };
  r.dr = pct(r.tn, r.tn + r.fn);
  r.fr = pct(r.fp, r.tp + r.fp);
  r.er = pct(r.fn + r.fp, r.tp + r.fp + r.tn + r.fn);
  return r;
}

std::string format_rate(const std::optional<double>& rate) {
  if (!rate) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *rate);
  return buf;
}

const char* perturb_mode_name(PerturbMode m) {
  switch (m) {
    case PerturbMode::kAttackOnly:
      return "attack-only";
    case PerturbMode::kNormalOnly:
      return "normal-only";
    case PerturbMode::kBoth:
      break;
  }
  return "both";
}

PerturbMode parse_perturb_mode(const std::string& text) {
  if (text == "both") return PerturbMode::kBoth;
  if (text == "attack-only") return PerturbMode::kAttackOnly;
  if (text == "normal-only") return PerturbMode::kNormalOnly;
  throw ConfigError("unknown perturbation mode '" + text + "'");
}

const char* granularity_name(PerturbGranularity g) {
  return g == PerturbGranularity::kPerValue ? "value" : "sample";
}

PerturbGranularity parse_granularity(const std::string& text) {
  if (text == "sample") return PerturbGranularity::kPerSample;
  if (text == "value") return PerturbGranularity::kPerValue;
  throw ConfigError("unknown perturbation granularity '" + text + "'");
}

void PerturbSpec::validate() const {
  if (!(lo > 0.0) || !(lo <= hi) || !std::isfinite(hi)) {
    throw ConfigError("perturbation range must satisfy 0 < lo <= hi");
  }
}

std::vector<LabeledSample> perturb(std::span<const LabeledSample> series, const PerturbSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<LabeledSample> out(series.begin(), series.end());
  for (auto& s : out) {
    const bool selected = spec.mode == PerturbMode::kBoth ||
                          (spec.mode == PerturbMode::kAttackOnly && s.label == Label::kAttack) ||
                          (spec.mode == PerturbMode::kNormalOnly && s.label == Label::kNormal);
    if (!selected) continue;
    if (spec.granularity == PerturbGranularity::kPerSample) {
      const double m = rng.uniform(spec.lo, spec.hi);
      for (auto& x : s.features.x) x *= m;
    } else {
      for (auto& x : s.features.x) x *= rng.uniform(spec.lo, spec.hi);
    }
  }
  return out;
}

}  // namespace mkldd
