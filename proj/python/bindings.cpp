#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mkldd/config.hpp"
#include "mkldd/ensemble.hpp"
#include "mkldd/error.hpp"
#include "mkldd/evaluation.hpp"
#include "mkldd/model_io.hpp"
#include "mkldd/pipeline.hpp"
#include "mkldd/synth.hpp"

namespace py = pybind11;
using namespace mkldd;

namespace {

using PacketTuple = std::tuple<double, std::string, std::string, int, int, std::uint64_t, std::string>;

Eigen::MatrixXd rows_to_matrix(const std::vector<FeatureVector>& rows) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), kFeatureDim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < kFeatureDim; ++j) x(i, j) = rows[i].x[j];
  }
  return x;
}

std::vector<FeatureVector> matrix_to_rows(const Eigen::MatrixXd& x) {
  if (x.cols() != static_cast<Eigen::Index>(kFeatureDim)) {
    throw DataError("feature matrix must have 5 columns, got " + std::to_string(x.cols()));
  }
  std::vector<FeatureVector> rows(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < kFeatureDim; ++j) rows[i].x[j] = x(i, j);
  }
  return rows;
}

std::vector<Label> to_label_vector(const std::vector<int>& y) {
  std::vector<Label> out;
  out.reserve(y.size());
  for (int v : y) out.push_back(label_from_int(v));
  return out;
}

std::vector<LabeledSample> make_samples(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  const auto rows = matrix_to_rows(x);
  if (rows.size() != y.size()) throw DataError("feature and label counts differ");
  std::vector<LabeledSample> out;
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back({rows[i], label_from_int(y[i])});
  return out;
}

// Returns (window starts, n x 5 features).
py::tuple extract(const std::vector<PacketTuple>& packets, const FeatureThresholds& th) {
  std::vector<PacketRecord> recs;
  recs.reserve(packets.size());
  for (const auto& [t, src, dst, sp, dp, size, proto] : packets) {
    recs.push_back({t, src, dst, static_cast<std::uint16_t>(sp), static_cast<std::uint16_t>(dp), size, proto});
  }
  const auto rows = extract_series(recs, th);
  std::vector<double> starts;
  for (const auto& r : rows) starts.push_back(r.window_start);
  return py::make_tuple(starts, rows_to_matrix(rows));
}

}  // namespace

PYBIND11_MODULE(_mkldd, m) {
  m.doc() = "Multiple-kernel DDoS detection: flow features, adaptive SimpleMKL, ensemble rule.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  py::class_<FeatureThresholds>(m, "Thresholds")
      .def(py::init<>())
      .def_readwrite("theta1", &FeatureThresholds::theta1)
      .def_readwrite("theta2", &FeatureThresholds::theta2)
      .def_readwrite("theta3", &FeatureThresholds::theta3)
      .def_readwrite("theta4", &FeatureThresholds::theta4)
      .def_readwrite("theta5", &FeatureThresholds::theta5)
      .def_readwrite("theta6", &FeatureThresholds::theta6)
      .def_readwrite("theta7", &FeatureThresholds::theta7)
      .def_readwrite("theta8", &FeatureThresholds::theta8)
      .def_readwrite("theta9", &FeatureThresholds::theta9)
      .def_readwrite("delta_t", &FeatureThresholds::delta_t);

  py::class_<RunConfig>(m, "Config")
      .def(py::init<>())
      .def_static("load", [](const std::string& path) { return load_config_file(path); })
      .def_static("parse",
                  [](const std::string& text) {
                    std::istringstream in(text);
                    return load_config(in);
                  })
      .def("dump",
           [](const RunConfig& c) {
             std::ostringstream out;
             dump_config(out, c);
             return out.str();
           })
      .def_readwrite("thresholds", &RunConfig::thresholds)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("train_fraction", &RunConfig::train_fraction)
      .def(py::self == py::self);

  m.def("extract_features", &extract, py::arg("packets"), py::arg("thresholds") = FeatureThresholds{},
        "Packets as (time, src, dst, src_port, dst_port, size, proto) tuples -> (window starts, n x 5 array).");

  m.def(
      "synthetic_features",
      [](std::uint64_t seed, double duration, double attack_start) {
        TrafficProfile p;
        p.duration = duration;
        p.attack_start = attack_start;
        p.validate();
        const auto samples = label_by_onset(extract_series(synth_traffic(p, seed), FeatureThresholds{}), attack_start);
        std::vector<FeatureVector> rows;
        std::vector<int> y;
        for (const auto& s : samples) {
          rows.push_back(s.features);
          y.push_back(to_int(s.label));
        }
        return py::make_tuple(rows_to_matrix(rows), y);
      },
      py::arg("seed") = 42, py::arg("duration") = 240.0, py::arg("attack_start") = 120.0,
      "Labeled features of a generated trace: (n x 5 array, labels in {+1, -1}).");

  py::class_<MklModel>(m, "Model")
      .def_readonly("d", &MklModel::d)
      .def_readonly("feature_weights", &MklModel::feature_weights)
      .def_readonly("bias", &MklModel::bias)
      .def_readonly("objective", &MklModel::objective)
      .def_readonly("iterations", &MklModel::iterations)
      .def_readonly("converged", &MklModel::converged)
      .def_property_readonly("n_support", [](const MklModel& mm) { return mm.support.size(); })
      .def("scores",
           [](const MklModel& mm, const Eigen::MatrixXd& x) {
             std::vector<double> out;
             for (const auto& r : matrix_to_rows(x)) out.push_back(decision_score(mm, r));
             return out;
           })
      .def("predict",
           [](const MklModel& mm, const Eigen::MatrixXd& x) {
             std::vector<int> out;
             for (const auto& r : matrix_to_rows(x)) out.push_back(to_int(classify(mm, r)));
             return out;
           })
      .def("save", [](const MklModel& mm, const std::string& path) { save_model(path, mm); })
      .def("to_json", [](const MklModel& mm) { return model_to_json(mm).dump(); });

  m.def("load_model", &load_model, py::arg("path"));

  m.def(
      "train",
      [](const Eigen::MatrixXd& x, const std::vector<int>& y, const std::string& mode, const RunConfig& cfg) {
        const auto samples = make_samples(x, y);
        py::gil_scoped_release release;
        if (mode == "baseline") return train_baseline_model(samples, cfg.pipeline);
        return train_adaptive_model(samples, cfg.pipeline, parse_mode(mode)).model;
      },
      py::arg("x"), py::arg("y"), py::arg("mode") = "m", py::arg("config") = RunConfig{},
      "Trains on labeled rows. mode is 'm', 's' or 'baseline' (no weight adaptation).");

  m.def(
      "arbitrate",
      [](const std::vector<int>& m_labels, const std::vector<int>& s_labels, int window) {
        DetectorConfig cfg;
        cfg.window_n = window;
        cfg.validate();
        const auto ml = to_label_vector(m_labels), sl = to_label_vector(s_labels);
        std::vector<int> out;
        for (const auto& v : arbitrate(ml, sl, cfg)) out.push_back(to_int(v.label));
        return out;
      },
      py::arg("m_labels"), py::arg("s_labels"), py::arg("window") = 8,
      "Combines the two label streams into final verdicts.");

  m.def(
      "check_rule",
      [](int n, int length) {
        const auto r = exhaustive_rule_check(n, length);
        py::dict d;
        d["streams"] = r.streams;
        d["positions"] = r.positions;
        d["mismatches"] = r.mismatches;
        return d;
      },
      py::arg("window"), py::arg("length"),
      "Compares the rule with its table-driven restatement on every label pair of the given length.");

  m.def(
      "metrics",
      [](const std::vector<int>& pred, const std::vector<int>& truth) {
        const auto r = metrics(to_label_vector(pred), to_label_vector(truth));
        py::dict d;
        d["tp"] = r.tp;
        d["fp"] = r.fp;
        d["tn"] = r.tn;
        d["fn"] = r.fn;
        d["dr"] = r.dr;
        d["fr"] = r.fr;
        d["er"] = r.er;
        return d;
      },
      py::arg("pred"), py::arg("truth"), "Counts and DR/FR/ER percentages; normal (+1) is the positive class.");

}
