#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mkldd/adaptive.hpp"
#include "mkldd/ensemble.hpp"
#include "mkldd/evaluation.hpp"
#include "mkldd/kernels.hpp"
#include "mkldd/simple_mkl.hpp"

namespace mkldd {

struct PipelineConfig {
  std::vector<KernelSpec> kernels = default_kernel_bank();
  double C = 1.0;
  MklOptions mkl;
  WeightAdaptConfig m_adapt = WeightAdaptConfig::m_defaults();
  WeightAdaptConfig s_adapt = WeightAdaptConfig::s_defaults();
  DetectorConfig detector;
  KernelSpec svm_kernel = KernelSpec::linear();
  double svm_C = 1.0;
  bool operator==(const PipelineConfig&) const = default;
};

/// Both adaptive models plus the two reference classifiers, all sharing the
/// normalizer fitted on the training set.
struct TrainedPipeline {
  AdaptiveResult m_smkl;
  AdaptiveResult s_smkl;
  MklModel simple_mkl;  // same kernel bank, all-ones feature weights
  MklModel svm;         // single kernel
  DetectorConfig detector;
};

/// Fits the normalizer, trains M-SMKL and S-SMKL with weight adaptation, and
/// the two baselines. Throws DataError for single-class training data.
TrainedPipeline train_pipeline(std::span<const LabeledSample> train, const PipelineConfig& cfg);

/// Trains one adaptive model on `train` with its own normalizer.
AdaptiveResult train_adaptive_model(std::span<const LabeledSample> train, const PipelineConfig& cfg,
                                    AdaptMode mode);

/// Plain SimpleMKL (no adaptation) on normalized `train`.
MklModel train_baseline_model(std::span<const LabeledSample> train, const PipelineConfig& cfg);

enum class Method { kEnsemble, kSimpleMkl, kSvm };
const char* method_name(Method m);
inline constexpr Method kAllMethods[] = {Method::kEnsemble, Method::kSimpleMkl, Method::kSvm};

std::vector<Label> predict(const TrainedPipeline& p, Method method, std::span<const FeatureVector> stream);

/// Stratified random split; both halves keep the original (time) order.
std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> split_samples(
    std::span<const LabeledSample> samples, double train_fraction, std::uint64_t seed);

struct MultiplierRange {
  double lo = 1.0;
  double hi = 1.0;
};

struct GridSpec {
  std::string name;  // "table1" ...
  PerturbMode mode = PerturbMode::kBoth;
  std::vector<MultiplierRange> ranges;
};

/// The three perturbation grids: scale both classes, shrink attacks only,
/// amplify normal traffic only.
GridSpec grid_spec(int table);

struct ExperimentRow {
  std::string table;
  PerturbMode mode = PerturbMode::kBoth;
  double lo = 1.0;
  double hi = 1.0;
  Method method = Method::kEnsemble;
  EvalReport report;
};

/// One row per (range, method). The test set of cell k is perturbed with a
/// generator seeded from (master_seed, cell_base + k).
std::vector<ExperimentRow> run_experiment_grid(const TrainedPipeline& p, std::span<const LabeledSample> test,
                                               const GridSpec& grid, std::uint64_t master_seed,
                                               PerturbGranularity granularity = PerturbGranularity::kPerSample,
                                               std::uint64_t cell_base = 0);

/// `table,mode,lo,hi,method,dr,fr,er`
void write_results_csv(std::ostream& out, std::span<const ExperimentRow> rows);

/// `method,tp,fp,tn,fn,dr,fr,er` for a single cell.
void write_cell_csv(std::ostream& out, std::span<const ExperimentRow> cell_rows);

/// Aligned DR/FR/ER table per method with one column per multiplier range.
void write_table_text(std::ostream& out, const GridSpec& grid, std::span<const ExperimentRow> rows);

}  // namespace mkldd
