#include "mkldd/config.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>

#include "mkldd/error.hpp"
#include "text_util.hpp"

namespace mkldd {

namespace {

using detail::format_double;

double to_double(std::string_view v) {
  const auto t = detail::trim(v);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  auto d = detail::parse_double(t);
  if (!d) throw ConfigError("expected a number, got '" + std::string(t) + "'");
  return *d;
}

template <class Int>
Int to_int(std::string_view v) {
  auto i = detail::parse_int<Int>(v);
  if (!i) throw ConfigError("expected an integer, got '" + std::string(detail::trim(v)) + "'");
  return *i;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += fmt(xs[i]);
  }
  return s;
}

std::vector<double> split_doubles(std::string_view v) {
  std::vector<double> out;
  for (auto part : detail::split(v, ',')) out.push_back(to_double(part));
  return out;
}

struct Key {
  std::string name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

template <class Access>
Key real_key(std::string name, Access access) {
  return {std::move(name), [access](const RunConfig& c) { return fmt(access(c)); },
          [access](RunConfig& c, std::string_view v) { access(c) = to_double(v); }};
}

template <class Int, class Access>
Key int_key(std::string name, Access access) {
  return {std::move(name),
          [access](const RunConfig& c) { return std::to_string(access(c)); },
          [access](RunConfig& c, std::string_view v) { access(c) = to_int<Int>(v); }};
}

void adapt_keys(std::vector<Key>& keys, const std::string& sec, WeightAdaptConfig PipelineConfig::*member) {
  auto field = [member](double WeightAdaptConfig::*f) {
    return [member, f](auto& c) -> auto& { return (c.pipeline.*member).*f; };
  };
  const std::pair<const char*, double WeightAdaptConfig::*> reals[] = {
      {"lr1", &WeightAdaptConfig::lr1}, {"lr2", &WeightAdaptConfig::lr2}, {"t1", &WeightAdaptConfig::t1},
      {"t2", &WeightAdaptConfig::t2},   {"t3", &WeightAdaptConfig::t3},   {"t4", &WeightAdaptConfig::t4},
      {"t5", &WeightAdaptConfig::t5},   {"t6", &WeightAdaptConfig::t6},   {"p1", &WeightAdaptConfig::p1},
      {"p2", &WeightAdaptConfig::p2},   {"p3", &WeightAdaptConfig::p3},   {"p4", &WeightAdaptConfig::p4},
      {"sigma1", &WeightAdaptConfig::sigma1}, {"sigma2", &WeightAdaptConfig::sigma2}};
  for (const auto& [name, f] : reals) keys.push_back(real_key(sec + "." + name, field(f)));
  keys.push_back(int_key<int>(sec + ".max_iter", [member](auto& c) -> auto& {
    return (c.pipeline.*member).max_iter;
  }));
  keys.push_back({sec + ".init_w",
                  [member](const RunConfig& c) { return join_doubles((c.pipeline.*member).init_w); },
                  [member](RunConfig& c, std::string_view v) { (c.pipeline.*member).init_w = split_doubles(v); }});
}

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    using TH = FeatureThresholds;
    const std::pair<const char*, double TH::*> th[] = {
        {"delta_t", &TH::delta_t}, {"theta1", &TH::theta1}, {"theta2", &TH::theta2},
        {"theta3", &TH::theta3},   {"theta4", &TH::theta4}, {"theta5", &TH::theta5},
        {"theta6", &TH::theta6},   {"theta7", &TH::theta7}, {"theta8", &TH::theta8},
        {"theta9", &TH::theta9}};
    for (const auto& [name, f] : th) {
      k.push_back(real_key(std::string("features.") + name,
                           [f](auto& c) -> auto& { return c.thresholds.*f; }));
    }
    k.push_back({"features.packet_rule",
                 [](const RunConfig& c) {
                   return std::string(c.thresholds.packet_rule == PacketWeightRule::kAsWritten ? "as-written"
                                                                                               : "sh-variant");
                 },
                 [](RunConfig& c, std::string_view v) {
                   const auto t = detail::trim(v);
                   if (t == "as-written") {
                     c.thresholds.packet_rule = PacketWeightRule::kAsWritten;
                   } else if (t == "sh-variant") {
                     c.thresholds.packet_rule = PacketWeightRule::kShVariant;
                   } else {
                     throw ConfigError("packet_rule must be as-written or sh-variant");
                   }
                 }});

    k.push_back(real_key("mkl.C", [](auto& c) -> auto& { return c.pipeline.C; }));
    k.push_back({"mkl.kernels",
                 [](const RunConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < c.pipeline.kernels.size(); ++i) {
                     if (i) s += ", ";
                     s += c.pipeline.kernels[i].to_string();
                   }
                   return s;
                 },
                 [](RunConfig& c, std::string_view v) {
                   c.pipeline.kernels.clear();
                   for (auto part : detail::split(v, ',')) {
                     c.pipeline.kernels.push_back(KernelSpec::parse(std::string(detail::trim(part))));
                   }
                 }});
    k.push_back(int_key<int>("mkl.max_iter", [](auto& c) -> auto& { return c.pipeline.mkl.max_iter; }));
    k.push_back(real_key("mkl.tolerance", [](auto& c) -> auto& { return c.pipeline.mkl.tolerance; }));
    k.push_back(real_key("mkl.armijo", [](auto& c) -> auto& { return c.pipeline.mkl.armijo; }));
    k.push_back(real_key("mkl.min_step", [](auto& c) -> auto& { return c.pipeline.mkl.min_step; }));
    k.push_back(
        real_key("mkl.dual_tolerance", [](auto& c) -> auto& { return c.pipeline.mkl.dual.tolerance; }));

    adapt_keys(k, "m_smkl", &PipelineConfig::m_adapt);
    adapt_keys(k, "s_smkl", &PipelineConfig::s_adapt);

    k.push_back(int_key<int>("detector.window", [](auto& c) -> auto& { return c.pipeline.detector.window_n; }));
    k.push_back({"svm.kernel", [](const RunConfig& c) { return c.pipeline.svm_kernel.to_string(); },
                 [](RunConfig& c, std::string_view v) {
                   c.pipeline.svm_kernel = KernelSpec::parse(std::string(detail::trim(v)));
                 }});
    k.push_back(real_key("svm.C", [](auto& c) -> auto& { return c.pipeline.svm_C; }));

    k.push_back(real_key("eval.train_fraction", [](auto& c) -> auto& { return c.train_fraction; }));
    k.push_back({"eval.granularity", [](const RunConfig& c) { return std::string(granularity_name(c.granularity)); },
                 [](RunConfig& c, std::string_view v) {
                   c.granularity = parse_granularity(std::string(detail::trim(v)));
                 }});

    k.push_back(real_key("synth.duration", [](auto& c) -> auto& { return c.synth.duration; }));
    k.push_back(real_key("synth.attack_start", [](auto& c) -> auto& { return c.synth.attack_start; }));
    k.push_back(real_key("synth.attack_ramp", [](auto& c) -> auto& { return c.synth.attack_ramp; }));
    k.push_back(int_key<int>("synth.normal_clients", [](auto& c) -> auto& { return c.synth.normal_clients; }));
    k.push_back(int_key<int>("synth.normal_servers", [](auto& c) -> auto& { return c.synth.normal_servers; }));
    k.push_back(real_key("synth.session_rate", [](auto& c) -> auto& { return c.synth.session_rate; }));
    k.push_back(real_key("synth.one_way_rate", [](auto& c) -> auto& { return c.synth.one_way_rate; }));
    k.push_back(int_key<int>("synth.attackers", [](auto& c) -> auto& { return c.synth.attackers; }));
    k.push_back(real_key("synth.attack_rate", [](auto& c) -> auto& { return c.synth.attack_rate; }));

    k.push_back({"paths.out_dir", [](const RunConfig& c) { return c.out_dir; },
                 [](RunConfig& c, std::string_view v) { c.out_dir = std::string(detail::trim(v)); }});
    k.push_back(int_key<std::uint64_t>("seed", [](auto& c) -> auto& { return c.seed; }));
    return k;
  }();
  return keys;
}

}  // namespace

void RunConfig::validate() const {
  thresholds.validate();
  for (const auto& k : pipeline.kernels) k.validate();
  if (pipeline.kernels.empty()) throw ConfigError("mkl.kernels must not be empty");
  if (!(pipeline.C > 0.0)) throw ConfigError("mkl.C must be positive");
  if (pipeline.mkl.max_iter < 1) throw ConfigError("mkl.max_iter must be at least 1");
  pipeline.m_adapt.validate();
  pipeline.s_adapt.validate();
  pipeline.detector.validate();
  pipeline.svm_kernel.validate();
  if (!(pipeline.svm_C > 0.0)) throw ConfigError("svm.C must be positive");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("eval.train_fraction must lie in (0, 1)");
  synth.validate();
  if (out_dir.empty()) throw ConfigError("paths.out_dir must not be empty");
}

RunConfig load_config(std::istream& in, RunConfig base) {
  const auto& keys = key_table();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = detail::trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const auto where = "config line " + std::to_string(lineno) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const auto name = detail::trim(body.substr(0, eq));
    const auto value = detail::trim(body.substr(eq + 1));
    const Key* key = nullptr;
    for (const auto& k : keys) {
      if (k.name == name) key = &k;
    }
    if (!key) throw ConfigError(where + "unknown key '" + std::string(name) + "'");
    try {
      key->set(base, value);
    } catch (const std::exception& e) {
      throw ConfigError(where + std::string(name) + ": " + e.what());
    }
  }
  base.validate();
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return load_config(in, std::move(base));
}

void dump_config(std::ostream& out, const RunConfig& cfg) {
  std::string section;
  for (const auto& k : key_table()) {
    const auto dot = k.name.find('.');
    const auto sec = dot == std::string::npos ? std::string() : k.name.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out << '\n';
      section = sec;
    }
    out << k.name << " = " << k.get(cfg) << '\n';
  }
}

}  // namespace mkldd
