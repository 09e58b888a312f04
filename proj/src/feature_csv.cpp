#include "mkldd/feature_csv.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "mkldd/error.hpp"
#include "text_util.hpp"

namespace mkldd {

namespace {
constexpr std::string_view kHeader = "window_start,acd,ibf,mff,hiad,ffv";
constexpr std::string_view kLabeledHeader = "window_start,acd,ibf,mff,hiad,ffv,label";
}  // namespace

std::vector<LabeledSample> FeatureTable::samples() const {
  if (!labeled()) throw DataError("feature table has no label column");
  std::vector<LabeledSample> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back({rows[i], labels[i]});
  return out;
}

FeatureTable read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  const auto header = detail::trim(line);
  bool with_label = false;
  if (header == kLabeledHeader) {
    with_label = true;
  } else if (header != kHeader) {
    throw DataError("line 1: invalid feature header, expected '" + std::string(kLabeledHeader) +
                    "' (label optional)");
  }

  FeatureTable table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cols = detail::split(line, ',');
    const std::size_t want = with_label ? 7 : 6;
    const auto fail = [&](const std::string& why) {
      throw DataError("line " + std::to_string(lineno) + ": " + why);
    };
    if (cols.size() != want) fail("expected " + std::to_string(want) + " columns");
    FeatureVector v;
    const auto start = detail::parse_double(cols[0]);
    if (!start) fail("window_start is not a number");
    v.window_start = *start;
    for (std::size_t j = 0; j < kFeatureDim; ++j) {
      const auto x = detail::parse_double(cols[j + 1]);
      if (!x || !std::isfinite(*x)) fail("feature value is not a finite number");
      v.x[j] = *x;
    }
    if (with_label) {
      const auto l = detail::parse_int<int>(cols[6]);
      if (!l || (*l != 1 && *l != -1)) fail("label must be +1 or -1");
      table.labels.push_back(label_from_int(*l));
    }
    table.rows.push_back(v);
  }
  return table;
}

FeatureTable read_feature_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open feature file '" + path + "'");
  return read_feature_csv(in);
}

void write_feature_csv(std::ostream& out, std::span<const FeatureVector> rows,
                       std::span<const Label> labels) {
  const bool with_label = !labels.empty();
  if (with_label && labels.size() != rows.size()) {
    throw ConfigError("label count does not match feature row count");
  }
  out << (with_label ? kLabeledHeader : kHeader) << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << detail::format_double(rows[i].window_start);
    for (double x : rows[i].x) out << ',' << detail::format_double(x);
    if (with_label) out << ',' << to_int(labels[i]);
    out << '\n';
  }
}

void write_feature_csv(std::ostream& out, std::span<const LabeledSample> samples) {
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
  for (const auto& s : samples) {
    rows.push_back(s.features);
    labels.push_back(s.label);
  }
  if (samples.empty()) {
    out << kLabeledHeader << '\n';
    return;
  }
  write_feature_csv(out, rows, labels);
}

void write_feature_csv_file(const std::string& path, std::span<const FeatureVector> rows,
                            std::span<const Label> labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write feature file '" + path + "'");
  write_feature_csv(out, rows, labels);
}

void write_feature_csv_file(const std::string& path, std::span<const LabeledSample> samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write feature file '" + path + "'");
  write_feature_csv(out, samples);
}

}  // namespace mkldd
