#include "mkldd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "mkldd/error.hpp"
#include "mkldd/rng.hpp"
#include "text_util.hpp"

namespace mkldd {

namespace {

struct PreparedTrain {
  Normalizer normalizer;
  Eigen::MatrixXd x;
  std::vector<int> y;
};

PreparedTrain prepare(std::span<const LabeledSample> train) {
  if (train.empty()) throw DataError("training set is empty");
  PreparedTrain p;
  std::vector<FeatureVector> rows;
  rows.reserve(train.size());
  for (const auto& s : train) rows.push_back(s.features);
  p.normalizer = Normalizer::fit(rows);
  for (auto& r : rows) r = p.normalizer.apply(r);
  p.x = to_matrix(rows);
  p.y = to_labels(train);
  const bool pos = std::find(p.y.begin(), p.y.end(), 1) != p.y.end();
  const bool neg = std::find(p.y.begin(), p.y.end(), -1) != p.y.end();
  if (!pos || !neg) throw DataError("training data must contain both normal and attack samples");
  return p;
}

}  // namespace

AdaptiveResult train_adaptive_model(std::span<const LabeledSample> train, const PipelineConfig& cfg,
                                    AdaptMode mode) {
  const auto p = prepare(train);
  auto result = train_adaptive(p.x, p.y, cfg.kernels, cfg.C,
                               mode == AdaptMode::kMSmkl ? cfg.m_adapt : cfg.s_adapt, mode, cfg.mkl);
  result.model.normalizer = p.normalizer;
  return result;
}

MklModel train_baseline_model(std::span<const LabeledSample> train, const PipelineConfig& cfg) {
  const auto p = prepare(train);
  auto model = simple_mkl_train(p.x, p.y, cfg.kernels, cfg.C, cfg.mkl);
  model.normalizer = p.normalizer;
  return model;
}

TrainedPipeline train_pipeline(std::span<const LabeledSample> train, const PipelineConfig& cfg) {
  const auto p = prepare(train);
  TrainedPipeline out;
  out.detector = cfg.detector;
  out.m_smkl = train_adaptive(p.x, p.y, cfg.kernels, cfg.C, cfg.m_adapt, AdaptMode::kMSmkl, cfg.mkl);
  out.m_smkl.model.normalizer = p.normalizer;
  out.s_smkl = train_adaptive(p.x, p.y, cfg.kernels, cfg.C, cfg.s_adapt, AdaptMode::kSSmkl, cfg.mkl);
  out.s_smkl.model.normalizer = p.normalizer;
  out.simple_mkl = simple_mkl_train(p.x, p.y, cfg.kernels, cfg.C, cfg.mkl);
  out.simple_mkl.normalizer = p.normalizer;
  out.svm = svm_train(p.x, p.y, cfg.svm_kernel, cfg.svm_C, cfg.mkl.dual);
  out.svm.normalizer = p.normalizer;
  return out;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::kSimpleMkl:
      return "simplemkl";
    case Method::kSvm:
      return "svm";
    case Method::kEnsemble:
      break;
  }
  return "ensemble";
}

std::vector<Label> predict(const TrainedPipeline& p, Method method, std::span<const FeatureVector> stream) {
  std::vector<Label> out;
  out.reserve(stream.size());
  switch (method) {
    case Method::kEnsemble:
      for (const auto& v : classify_stream(p.m_smkl.model, p.s_smkl.model, stream, p.detector)) {
        out.push_back(v.label);
      }
      break;
    case Method::kSimpleMkl:
      for (const auto& x : stream) out.push_back(classify(p.simple_mkl, x));
      break;
    case Method::kSvm:
      for (const auto& x : stream) out.push_back(classify(p.svm, x));
      break;
  }
  return out;
}

std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split_samples(
    std::span<const LabeledSample> samples, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0, 1)");
  }
  Rng rng(seed);
  std::vector<bool> to_train(samples.size(), false);
  for (Label cls : {Label::kNormal, Label::kAttack}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].label == cls) idx.push_back(i);
    }
    // Fisher-Yates with the portable generator.
    for (std::size_t k = idx.size(); k > 1; --k) {
      std::swap(idx[k - 1], idx[rng.below(k)]);
    }
    const auto take = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
    for (std::size_t k = 0; k < take && k < idx.size(); ++k) to_train[idx[k]] = true;
  }
  std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (to_train[i] ? out.first : out.second).push_back(samples[i]);
  }
  return out;
}

GridSpec grid_spec(int table) {
  GridSpec g;
  switch (table) {
    case 1:
      g.name = "table1";
      g.mode = PerturbMode::kBoth;
      g.ranges = {{0.6, 0.7}, {0.7, 0.8}, {0.8, 0.9}, {0.9, 1.1}, {1.0, 1.5},
                  {1.5, 2.0}, {2.0, 3.0}, {3.0, 4.0}, {4.0, 5.0}};
      break;
    case 2:
      g.name = "table2";
      g.mode = PerturbMode::kAttackOnly;
      for (int k = 1; k <= 9; ++k) g.ranges.push_back({k / 10.0, (k + 1) / 10.0});
      break;
    case 3:
      g.name = "table3";
      g.mode = PerturbMode::kNormalOnly;
      for (int k = 0; k < 9; ++k) g.ranges.push_back({1.0 + 0.5 * k, 1.5 + 0.5 * k});
      break;
    default:
      throw ConfigError("unknown experiment table " + std::to_string(table));
  }
  return g;
}

std::vector<ExperimentRow> run_experiment_grid(const TrainedPipeline& p, std::span<const LabeledSample> test,
                                               const GridSpec& grid, std::uint64_t master_seed,
                                               PerturbGranularity granularity, std::uint64_t cell_base) {
  std::vector<ExperimentRow> rows;
  std::vector<Label> truth;
  for (const auto& s : test) truth.push_back(s.label);

  for (std::size_t k = 0; k < grid.ranges.size(); ++k) {
    PerturbSpec spec;
    spec.mode = grid.mode;
    spec.lo = grid.ranges[k].lo;
    spec.hi = grid.ranges[k].hi;
    spec.seed = Rng::derive(master_seed, cell_base + k);
    spec.granularity = granularity;
    const auto perturbed = perturb(test, spec);
    std::vector<FeatureVector> stream;
    stream.reserve(perturbed.size());
    for (const auto& s : perturbed) stream.push_back(s.features);

    for (Method m : kAllMethods) {
      ExperimentRow row;
      row.table = grid.name;
      row.mode = grid.mode;
      row.lo = spec.lo;
      row.hi = spec.hi;
      row.method = m;
      row.report = metrics(predict(p, m, stream), truth);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_results_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
  out << "table,mode,lo,hi,method,dr,fr,er\n";
  for (const auto& r : rows) {
    out << r.table << ',' << perturb_mode_name(r.mode) << ',' << detail::format_double(r.lo) << ','
        << detail::format_double(r.hi) << ',' << method_name(r.method) << ',' << format_rate(r.report.dr)
        << ',' << format_rate(r.report.fr) << ',' << format_rate(r.report.er) << '\n';
  }
}

void write_cell_csv(std::ostream& out, std::span<const ExperimentRow> cell_rows) {
  out << "method,tp,fp,tn,fn,dr,fr,er\n";
  for (const auto& r : cell_rows) {
    out << method_name(r.method) << ',' << r.report.tp << ',' << r.report.fp << ',' << r.report.tn << ','
        << r.report.fn << ',' << format_rate(r.report.dr) << ',' << format_rate(r.report.fr) << ','
        << format_rate(r.report.er) << '\n';
  }
}

void write_table_text(std::ostream& out, const GridSpec& grid, std::span<const ExperimentRow> rows) {
  const auto range_label = [](const MultiplierRange& r) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f-%.1f", r.lo, r.hi);
    return std::string(buf);
  };
  constexpr int kHead = 18;
  constexpr int kCol = 10;
  out << grid.name << " (" << perturb_mode_name(grid.mode) << ")\n";
  out << std::left << std::setw(kHead) << "method / rate";
  for (const auto& r : grid.ranges) out << std::right << std::setw(kCol) << range_label(r);
  out << '\n';
  for (Method m : kAllMethods) {
    for (int which = 0; which < 3; ++which) {
      std::ostringstream head;
      head << method_name(m) << ' ' << (which == 0 ? "DR(%)" : which == 1 ? "FR(%)" : "ER(%)");
      out << std::left << std::setw(kHead) << head.str();
      for (const auto& range : grid.ranges) {
        std::string cell = "-";
        for (const auto& row : rows) {
          if (row.method != m || row.lo != range.lo || row.hi != range.hi) continue;
          cell = format_rate(which == 0 ? row.report.dr : which == 1 ? row.report.fr : row.report.er);
        }
        out << std::right << std::setw(kCol) << cell;
      }
      out << '\n';
    }
  }
}

}  // namespace mkldd
