#include "mkldd/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mkldd/config.hpp"
#include "mkldd/error.hpp"
#include "mkldd/feature_csv.hpp"
#include "mkldd/model_io.hpp"
#include "mkldd/packet_csv.hpp"
#include "mkldd/rng.hpp"
#include "text_util.hpp"

namespace mkldd {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

RunConfig resolve(const Globals& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_config_file(g.config_path);
  if (g.seed) cfg.seed = *g.seed;
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void print_diagnostics(const std::vector<std::string>& diags) {
  for (const auto& d : diags) std::cerr << "warning: " << d << '\n';
}

std::vector<LabeledSample> labeled_samples(const std::string& path) {
  auto table = read_feature_csv_file(path);
  if (!table.labeled()) throw DataError(path + ": a label column is required");
  return table.samples();
}

// extract -------------------------------------------------------------------

struct ExtractArgs {
  std::string in, out;
  std::optional<double> attack_start;
};

int cmd_extract(const Globals& g, const ExtractArgs& a) {
  const auto cfg = resolve(g);
  CsvReadOptions opts;
  opts.strict = g.strict;
  auto csv = read_packet_csv_file(a.in, opts);
  print_diagnostics(csv.diagnostics);
  std::vector<std::string> diags;
  const auto series = extract_series(csv.packets, cfg.thresholds, &diags);
  print_diagnostics(diags);
  auto out = open_out(a.out);
  if (a.attack_start) {
    write_feature_csv(out, label_by_onset(series, *a.attack_start));
  } else {
    write_feature_csv(out, series);
  }
  return kExitOk;
}

// train ---------------------------------------------------------------------

struct TrainArgs {
  std::string features, mode = "both", out_dir;
  bool baseline = false;
};

int cmd_train(const Globals& g, const TrainArgs& a) {
  const auto cfg = resolve(g);
  const auto samples = labeled_samples(a.features);
  const auto dir = a.out_dir.empty() ? cfg.out_dir : a.out_dir;
  fs::create_directories(dir);

  if (a.baseline) {
    const auto model = train_baseline_model(samples, cfg.pipeline);
    save_model(join(dir, "simplemkl.json"), model);
    std::cout << "simplemkl: J=" << detail::format_double(model.objective) << " iterations=" << model.iterations
              << '\n';
    return model.converged ? kExitOk : kExitNotConverged;
  }

  std::vector<AdaptMode> modes;
  if (a.mode == "both") {
    modes = {AdaptMode::kMSmkl, AdaptMode::kSSmkl};
  } else {
    modes = {parse_mode(a.mode)};
  }
  bool all_converged = true;
  for (AdaptMode mode : modes) {
    const auto result = train_adaptive_model(samples, cfg.pipeline, mode);
    const std::string tag = std::string(mode_name(mode)) + "_smkl";
    save_model(join(dir, tag + ".json"), result.model);
    auto tele = open_out(join(dir, "telemetry_" + tag + ".csv"));
    write_telemetry_csv(tele, result.state);
    std::cout << tag << ": iterations=" << result.state.iter << " stop=" << stop_name(result.stop) << '\n';
    all_converged = all_converged && result.converged();
  }
  return all_converged ? kExitOk : kExitNotConverged;
}

// detect --------------------------------------------------------------------

struct DetectArgs {
  std::string m_model, s_model, features, out;
};

int cmd_detect(const Globals& g, const DetectArgs& a) {
  const auto cfg = resolve(g);
  const auto m = load_model(a.m_model);
  const auto s = load_model(a.s_model);
  const auto table = read_feature_csv_file(a.features);
  const auto verdicts = classify_stream(m, s, table.rows, cfg.pipeline.detector);
  auto out = open_out(a.out);
  write_verdict_csv(out, verdicts);
  return kExitOk;
}

// eval ----------------------------------------------------------------------

// Predictions come either from a verdict file (final_label column) or from a
// labeled feature file.
std::vector<Label> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  if (detail::trim(header) != "index,window_start,m_label,s_label,rule,final_label") {
    auto table = read_feature_csv_file(path);
    if (!table.labeled()) throw DataError(path + ": no labels to evaluate");
    return table.labels;
  }
  std::vector<Label> out;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line, ',');
    const auto v = fields.size() == 6 ? detail::parse_int<int>(fields[5]) : std::nullopt;
    if (!v) throw DataError(path + ": line " + std::to_string(lineno) + ": malformed verdict row");
    out.push_back(label_from_int(*v));
  }
  return out;
}

struct EvalArgs {
  std::string pred, truth, out;
};

int cmd_eval(const Globals& g, const EvalArgs& a) {
  resolve(g);
  const auto pred = read_predictions(a.pred);
  const auto truth_table = read_feature_csv_file(a.truth);
  if (!truth_table.labeled()) throw DataError(a.truth + ": a label column is required");
  if (pred.size() != truth_table.labels.size()) {
    throw DataError("prediction and truth lengths differ (" + std::to_string(pred.size()) + " vs " +
                    std::to_string(truth_table.labels.size()) + ")");
  }
  const auto r = metrics(pred, truth_table.labels);
  std::ostringstream report;
  report << "tp,fp,tn,fn,dr,fr,er\n"
         << r.tp << ',' << r.fp << ',' << r.tn << ',' << r.fn << ',' << format_rate(r.dr) << ','
         << format_rate(r.fr) << ',' << format_rate(r.er) << '\n';
  if (a.out.empty()) {
    std::cout << report.str();
  } else {
    auto out = open_out(a.out);
    out << report.str();
  }
  return kExitOk;
}

// perturb -------------------------------------------------------------------

struct PerturbArgs {
  std::string in, out, mode = "both";
  double lo = 1.0, hi = 1.0;
};

int cmd_perturb(const Globals& g, const PerturbArgs& a) {
  const auto cfg = resolve(g);
  const auto table = read_feature_csv_file(a.in);
  PerturbSpec spec;
  spec.mode = parse_perturb_mode(a.mode);
  spec.lo = a.lo;
  spec.hi = a.hi;
  spec.seed = cfg.seed;
  spec.granularity = cfg.granularity;
  spec.validate();
  if (!table.labeled() && spec.mode != PerturbMode::kBoth) {
    throw DataError(a.in + ": class-selective perturbation needs a label column");
  }
  std::vector<LabeledSample> samples;
  if (table.labeled()) {
    samples = table.samples();
  } else {
    for (const auto& r : table.rows) samples.push_back({r, Label::kNormal});
  }
  const auto out_samples = perturb(samples, spec);
  auto out = open_out(a.out);
  if (table.labeled()) {
    write_feature_csv(out, out_samples);
  } else {
    std::vector<FeatureVector> rows;
    for (const auto& s : out_samples) rows.push_back(s.features);
    write_feature_csv(out, rows);
  }
  return kExitOk;
}

// synth ---------------------------------------------------------------------

struct SynthArgs {
  std::string out, features;
};

int cmd_synth(const Globals& g, const SynthArgs& a) {
  const auto cfg = resolve(g);
  const auto packets = synth_traffic(cfg.synth, cfg.seed);
  {
    auto out = open_out(a.out);
    write_packet_csv(out, packets);
  }
  if (!a.features.empty()) {
    const auto series = extract_series(packets, cfg.thresholds);
    auto out = open_out(a.features);
    write_feature_csv(out, label_by_onset(series, cfg.synth.attack_start));
  }
  return kExitOk;
}

// experiment ----------------------------------------------------------------

struct ExperimentArgs {
  std::string features, out_dir;
  std::vector<int> tables{1, 2, 3};
};

int cmd_experiment(const Globals& g, const ExperimentArgs& a) {
  const auto cfg = resolve(g);
  const auto dir = a.out_dir.empty() ? cfg.out_dir : a.out_dir;
  fs::create_directories(dir);

  std::vector<LabeledSample> samples;
  if (a.features.empty()) {
    const auto packets = synth_traffic(cfg.synth, Rng::derive(cfg.seed, 0));
    samples = label_by_onset(extract_series(packets, cfg.thresholds), cfg.synth.attack_start);
  } else {
    samples = labeled_samples(a.features);
  }
  const auto [train, test] = split_samples(samples, cfg.train_fraction, Rng::derive(cfg.seed, 1));
  const auto pipeline = train_pipeline(train, cfg.pipeline);

  std::vector<ExperimentRow> all_rows;
  std::ofstream tables = open_out(join(dir, "tables.txt"));
  for (int t : a.tables) {
    const auto grid = grid_spec(t);
    const auto rows = run_experiment_grid(pipeline, test, grid, cfg.seed, cfg.granularity,
                                          1000 * static_cast<std::uint64_t>(t));
    write_table_text(tables, grid, rows);
    tables << '\n';
    for (std::size_t k = 0; k < grid.ranges.size(); ++k) {
      const std::span<const ExperimentRow> cell(rows.data() + k * std::size(kAllMethods), std::size(kAllMethods));
      auto out = open_out(join(dir, grid.name + "_cell" + std::to_string(k + 1) + ".csv"));
      write_cell_csv(out, cell);
    }
    all_rows.insert(all_rows.end(), rows.begin(), rows.end());
  }
  auto results = open_out(join(dir, "results.csv"));
  write_results_csv(results, all_rows);
  std::cout << "train=" << train.size() << " test=" << test.size()
            << " m_smkl=" << stop_name(pipeline.m_smkl.stop) << " s_smkl=" << stop_name(pipeline.s_smkl.stop)
            << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Multiple-kernel DDoS detection on flow features"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Key = value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Override the configured seed");
  app.add_flag("--strict", g.strict, "Abort on the first malformed packet row");
  app.fallthrough();

  std::function<int()> action;

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Packets CSV -> per-window feature CSV");
  extract->add_option("--in,-i", ex.in, "Packet CSV")->required()->check(CLI::ExistingFile);
  extract->add_option("--out,-o", ex.out, "Feature CSV")->required();
  extract->add_option("--attack-start", ex.attack_start, "Label windows starting at or after this time as attack");
  extract->callback([&] { action = [&] { return cmd_extract(g, ex); }; });

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train adaptive models from labeled features");
  train->add_option("--features,-f", tr.features, "Labeled feature CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--mode", tr.mode, "m, s or both")->check(CLI::IsMember({"m", "s", "both"}));
  train->add_option("--out-dir,-o", tr.out_dir, "Output directory (default paths.out_dir)");
  train->add_flag("--baseline", tr.baseline, "Train plain SimpleMKL without weight adaptation");
  train->callback([&] { action = [&] { return cmd_train(g, tr); }; });

  DetectArgs de;
  auto* detect = app.add_subcommand("detect", "Classify a feature stream with both models");
  detect->add_option("--m-model", de.m_model, "M-SMKL model")->required()->check(CLI::ExistingFile);
  detect->add_option("--s-model", de.s_model, "S-SMKL model")->required()->check(CLI::ExistingFile);
  detect->add_option("--features,-f", de.features, "Feature CSV")->required()->check(CLI::ExistingFile);
  detect->add_option("--out,-o", de.out, "Verdict CSV")->required();
  detect->callback([&] { action = [&] { return cmd_detect(g, de); }; });

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Detection, false-alarm and error rates");
  eval->add_option("--pred", ev.pred, "Verdict CSV or labeled feature CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--truth", ev.truth, "Labeled feature CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--out,-o", ev.out, "Report CSV (default stdout)");
  eval->callback([&] { action = [&] { return cmd_eval(g, ev); }; });

  PerturbArgs pe;
  auto* pert = app.add_subcommand("perturb", "Multiply feature rows by random factors");
  pert->add_option("--in,-i", pe.in, "Feature CSV")->required()->check(CLI::ExistingFile);
  pert->add_option("--out,-o", pe.out, "Feature CSV")->required();
  pert->add_option("--lo", pe.lo, "Lower multiplier")->required();
  pert->add_option("--hi", pe.hi, "Upper multiplier")->required();
  pert->add_option("--mode", pe.mode, "both, attack-only or normal-only")
      ->check(CLI::IsMember({"both", "attack-only", "normal-only"}));
  pert->callback([&] { action = [&] { return cmd_perturb(g, pe); }; });

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic packet trace");
  synth->add_option("--out,-o", sy.out, "Packet CSV")->required();
  synth->add_option("--features", sy.features, "Also write labeled features here");
  synth->callback([&] { action = [&] { return cmd_synth(g, sy); }; });

  ExperimentArgs xp;
  auto* experiment = app.add_subcommand("experiment", "Perturbation grids over all methods");
  experiment->add_option("--features,-f", xp.features, "Labeled feature CSV (default: synthetic trace)")
      ->check(CLI::ExistingFile);
  experiment->add_option("--out-dir,-o", xp.out_dir, "Output directory (default paths.out_dir)");
  experiment->add_option("--tables", xp.tables, "Grids to run")->check(CLI::Range(1, 3))->delimiter(',');
  experiment->callback([&] { action = [&] { return cmd_experiment(g, xp); }; });

  auto* dump = app.add_subcommand("dump-config", "Print the effective configuration");
  dump->callback([&] {
    action = [&] {
      dump_config(std::cout, resolve(g));
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace mkldd
