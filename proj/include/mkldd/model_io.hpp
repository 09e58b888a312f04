#pragma once

#include <string>

#include "json.hpp"

#include "mkldd/simple_mkl.hpp"

namespace mkldd {

inline constexpr int kModelFormatVersion = 1;

/// Self-describing JSON document: format tag and version, kernels, d, C,
/// bias, feature weights, normalizer bounds, and the support set (alpha,
/// label, and the normalized but unweighted vector). Doubles are written in
/// shortest round-trip form, so a reload scores identically.
nlohmann::json model_to_json(const MklModel& model);
MklModel model_from_json(const nlohmann::json& doc);

void save_model(const std::string& path, const MklModel& model);
MklModel load_model(const std::string& path);

}  // namespace mkldd
