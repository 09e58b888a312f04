#include "mkldd/model_io.hpp"

#include <fstream>

#include "mkldd/error.hpp"

namespace mkldd {

namespace {
constexpr const char* kFormatTag = "mkldd-model";
}

nlohmann::json model_to_json(const MklModel& model) {
  using nlohmann::json;
  json doc;
  doc["format"] = kFormatTag;
  doc["format_version"] = kModelFormatVersion;
  json kernels = json::array();
  for (const auto& k : model.kernels) kernels.push_back(k.to_string());
  doc["kernels"] = kernels;
  doc["d"] = model.d;
  doc["C"] = model.C;
  doc["bias"] = model.bias;
  doc["feature_weights"] = model.feature_weights;
  doc["normalizer"] = {{"min", model.normalizer.lo()}, {"max", model.normalizer.hi()}};
  json support = json::array();
  for (const auto& sv : model.support) support.push_back({{"x", sv.x}, {"y", sv.y}, {"alpha", sv.alpha}});
  doc["support"] = support;
  doc["objective"] = model.objective;
  doc["iterations"] = model.iterations;
  doc["converged"] = model.converged;
  return doc;
}

MklModel model_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kFormatTag) throw DataError("not a model document");
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model format version " + std::to_string(version));
    }
    MklModel m;
    for (const auto& k : doc.at("kernels")) m.kernels.push_back(KernelSpec::parse(k.get<std::string>()));
    m.d = doc.at("d").get<std::vector<double>>();
    m.C = doc.at("C").get<double>();
    m.bias = doc.at("bias").get<double>();
    m.feature_weights = doc.at("feature_weights").get<std::vector<double>>();
    const auto& norm = doc.at("normalizer");
    m.normalizer = Normalizer(norm.at("min").get<std::vector<double>>(), norm.at("max").get<std::vector<double>>());
    for (const auto& s : doc.at("support")) {
      SupportVector sv;
      sv.x = s.at("x").get<std::vector<double>>();
      sv.y = s.at("y").get<int>();
      sv.alpha = s.at("alpha").get<double>();
      if (sv.x.size() != m.feature_weights.size()) throw DataError("support vector dimension mismatch");
      m.support.push_back(std::move(sv));
    }
    m.objective = doc.value("objective", 0.0);
    m.iterations = doc.value("iterations", 0);
    m.converged = doc.value("converged", true);
    if (m.d.size() != m.kernels.size()) throw DataError("kernel weight count mismatch");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const std::string& path, const MklModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file '" + path + "'");
  out << model_to_json(model).dump(2) << '\n';
}

MklModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("model file '" + path + "' is not valid JSON: " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace mkldd
