#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "mkldd/evaluation.hpp"
#include "mkldd/features.hpp"
#include "mkldd/pipeline.hpp"
#include "mkldd/synth.hpp"

namespace mkldd {

/// Everything a run needs. Defaults are the reference parameter set.
struct RunConfig {
  FeatureThresholds thresholds;
  PipelineConfig pipeline;
  TrafficProfile synth;
  double train_fraction = 0.5;
  PerturbGranularity granularity = PerturbGranularity::kPerSample;
  std::string out_dir = ".";
  std::uint64_t seed = 42;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Flat `section.key = value` lines; `#` starts a comment. Unknown keys and
/// unparsable values throw ConfigError naming the line.
RunConfig load_config(std::istream& in, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Writes every key, so the output loads back to an equal config.
void dump_config(std::ostream& out, const RunConfig& cfg);

}  // namespace mkldd
