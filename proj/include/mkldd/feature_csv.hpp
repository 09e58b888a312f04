#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mkldd/features.hpp"

namespace mkldd {

/// `window_start,acd,ibf,mff,hiad,ffv[,label]`, label in {+1, -1}.
struct FeatureTable {
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;  // empty when the file has no label column

  bool labeled() const { return !labels.empty() || rows.empty(); }
  std::vector<LabeledSample> samples() const;
};

FeatureTable read_feature_csv(std::istream& in);
FeatureTable read_feature_csv_file(const std::string& path);

void write_feature_csv(std::ostream& out, std::span<const FeatureVector> rows,
                       std::span<const Label> labels = {});
void write_feature_csv(std::ostream& out, std::span<const LabeledSample> samples);
void write_feature_csv_file(const std::string& path, std::span<const FeatureVector> rows,
                            std::span<const Label> labels = {});
void write_feature_csv_file(const std::string& path, std::span<const LabeledSample> samples);

}  // namespace mkldd
