#include "mkldd/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mkldd/error.hpp"

namespace mkldd {

void FeatureThresholds::validate() const {
  if (!(theta1 > 0.0 && theta1 < 1.0)) throw ConfigError("theta1 must lie in (0, 1)");
  if (!(theta2 >= 0.0 && theta2 <= 1.0)) throw ConfigError("theta2 must lie in [0, 1]");
  for (double t : {theta3, theta4, theta5, theta6, theta7, theta8, theta9}) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("theta3..theta9 must be non-negative");
  }
  if (!(delta_t > 0.0) || !std::isfinite(delta_t)) throw ConfigError("delta_t must be positive");
}

Label label_from_int(int v) {
  if (v == 1) return Label::kNormal;
  if (v == -1) return Label::kAttack;
  throw DataError("label must be +1 (normal) or -1 (attack), got " + std::to_string(v));
}

const char* label_name(Label l) { return l == Label::kNormal ? "normal" : "attack"; }

ClassCounts count_classes(const ClassPartition& part) {
  ClassCounts c;

  // Sources that talk to exactly one destination keep their single SD class.
  {
    std::map<std::string, std::vector<const PacketList*>> by_src;
    for (const auto& [key, list] : part.sd) by_src[key.first].push_back(&list);
    for (const auto& [src, classes] : by_src) {
      if (classes.size() != 1) continue;
      c.acs.push_back({distinct_ports(*classes.front()), classes.front()->size()});
    }
  }

  // Destinations reached by a single source are dropped; the rest regroup by
  // destination.
  for (const auto& [dst, list] : part.ipd) {
    std::map<std::string, std::size_t> per_source;
    for (const auto& p : list) ++per_source[p.src_ip];
    if (per_source.size() < 2) continue;
    SddClass cls;
    cls.ports = distinct_ports(list);
    for (const auto& [src, n] : per_source) cls.packets_per_source.push_back(n);
    c.sdd.push_back(std::move(cls));
  }

  for (const auto& [src, list] : part.sh) {
    c.sh_ports.push_back(distinct_ports(list));
    c.sh_packets.push_back(list.size());
  }
  for (const auto& [dst, list] : part.dh) c.dh_ports.push_back(distinct_ports(list));
  for (const auto& [key, list] : part.sd) c.sd_packets.push_back(list.size());
  c.if_count = part.if_flows.size();

  {
    std::map<std::string, std::pair<std::set<std::string>, std::set<std::uint16_t>>> by_dst;
    for (const auto& [src, list] : part.sh) {
      for (const auto& p : list) {
        auto& [sources, ports] = by_dst[p.dst_ip];
        sources.insert(p.src_ip);
        ports.insert(p.dst_port);
      }
    }
    for (const auto& [dst, sp] : by_dst) c.hsd.push_back({sp.first.size(), sp.second.size()});
  }
  return c;
}

FeatureIntermediates evaluate_intermediates(const ClassCounts& c, const FeatureThresholds& th) {
  const double dt = th.delta_t;
  FeatureIntermediates f;

  for (const auto& a : c.acs) {
    f.w_acs.push_back(th.theta1 * static_cast<double>(a.ports) +
                      (1.0 - th.theta1) * static_cast<double>(a.packets));
  }

  for (const auto& s : c.sdd) {
    double oa = 0.0;
    for (auto n : s.packets_per_source) oa += rate_gate(static_cast<double>(n), th.theta3, dt);
    const double ob = rate_gate(static_cast<double>(s.ports), th.theta4, dt);
    f.cip.push_back(static_cast<double>(s.packets_per_source.size()) + th.theta2 * oa +
                    (1.0 - th.theta2) * (ob - 1.0));
  }

  for (auto p : c.sh_ports) f.ibf_sh_ports += rate_gate(static_cast<double>(p), th.theta5, dt);
  for (auto p : c.dh_ports) f.ibf_dh_ports += rate_gate(static_cast<double>(p), th.theta5, dt);

  for (auto n : c.sh_packets) f.weight_sh += rate_gate(static_cast<double>(n), th.theta6, dt);
  for (auto n : c.sd_packets) f.weight_sd += rate_gate(static_cast<double>(n), th.theta7, dt);
  const auto flag = [](double x) { return x > 0.0 ? 0.0 : 1.0; };
  switch (th.packet_rule) {
    case PacketWeightRule::kAsWritten:
      f.weight_packet = flag(f.weight_sd) * f.weight_sd + f.weight_sd;
      break;
    case PacketWeightRule::kShVariant:
      f.weight_packet = flag(f.weight_sh) * f.weight_sd + f.weight_sh;
      break;
  }
  for (auto p : c.sh_ports) f.weight_port += rate_gate(static_cast<double>(p), th.theta8, dt);
  for (auto p : c.dh_ports) f.weight_port += rate_gate(static_cast<double>(p), th.theta8, dt);

  for (const auto& h : c.hsd) {
    f.hiad_terms.push_back(static_cast<double>(h.sources) +
                           rate_gate(static_cast<double>(h.ports), th.theta9, dt));
  }
  return f;
}

namespace {

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

double acd(const ClassCounts& c, const FeatureThresholds& th) {
  return sum(evaluate_intermediates(c, th).w_acs);
}

double ffv(const ClassCounts& c, const FeatureThresholds& th) {
  if (c.sdd.empty()) return 0.0;
  return sum(evaluate_intermediates(c, th).cip) - static_cast<double>(c.sdd.size());
}

double ibf(const ClassCounts& c, const FeatureThresholds& th) {
  const auto f = evaluate_intermediates(c, th);
  const double s = static_cast<double>(c.sh_ports.size());
  const double d = static_cast<double>(c.dh_ports.size());
  return (std::abs(s - d) + f.ibf_sh_ports + f.ibf_dh_ports) /
         (static_cast<double>(c.if_count) + 1.0);
}

double mff(const ClassCounts& c, const FeatureThresholds& th) {
  const auto f = evaluate_intermediates(c, th);
  const double s = static_cast<double>(c.sh_ports.size());
  return (s + f.weight_port + f.weight_packet) / (static_cast<double>(c.if_count) + 1.0);
}

double hiad(const ClassCounts& c, const FeatureThresholds& th) {
  return sum(evaluate_intermediates(c, th).hiad_terms);
}

double acd(const ClassPartition& p, const FeatureThresholds& th) { return acd(count_classes(p), th); }
double ffv(const ClassPartition& p, const FeatureThresholds& th) { return ffv(count_classes(p), th); }
double ibf(const ClassPartition& p, const FeatureThresholds& th) { return ibf(count_classes(p), th); }
double mff(const ClassPartition& p, const FeatureThresholds& th) { return mff(count_classes(p), th); }
double hiad(const ClassPartition& p, const FeatureThresholds& th) { return hiad(count_classes(p), th); }

FeatureVector compute_features(const FlowWindow& window, const FeatureThresholds& th) {
  const auto counts = count_classes(build_partition(window));
  FeatureVector v;
  v.window_start = window.start;
  v.x = {acd(counts, th), ibf(counts, th), mff(counts, th), hiad(counts, th), ffv(counts, th)};
  return v;
}

std::vector<FeatureVector> extract_series(std::span<const PacketRecord> packets,
                                          const FeatureThresholds& th,
                                          std::vector<std::string>* diagnostics) {
  th.validate();
  const auto windows = partition_stream(packets, th.delta_t, diagnostics);
  std::vector<FeatureVector> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(compute_features(w, th));
  return out;
}

std::vector<LabeledSample> label_by_onset(std::span<const FeatureVector> series, double attack_start) {
  std::vector<LabeledSample> out;
  out.reserve(series.size());
  for (const auto& v : series) {
    out.push_back({v, v.window_start >= attack_start ? Label::kAttack : Label::kNormal});
  }
  return out;
}

// ---------------------------------------------------------------------------

Normalizer::Normalizer(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) throw ConfigError("normalizer bounds differ in length");
  for (std::size_t j = 0; j < lo_.size(); ++j) {
    if (!(lo_[j] <= hi_[j])) throw ConfigError("normalizer lower bound exceeds upper bound");
  }
}

Normalizer Normalizer::fit(std::span<const FeatureVector> train) {
  if (train.empty()) throw DataError("cannot fit a normalizer on an empty training set");
  std::vector<double> lo(train.front().x.begin(), train.front().x.end());
  std::vector<double> hi = lo;
  for (const auto& v : train) {
    for (std::size_t j = 0; j < kFeatureDim; ++j) {
      lo[j] = std::min(lo[j], v.x[j]);
      hi[j] = std::max(hi[j], v.x[j]);
    }
  }
  return Normalizer(std::move(lo), std::move(hi));
}

std::vector<double> Normalizer::apply(std::span<const double> v) const {
  std::vector<double> out(v.begin(), v.end());
  if (is_identity()) return out;
  if (v.size() != lo_.size()) throw ConfigError("normalizer dimension mismatch");
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double range = hi_[j] - lo_[j];
    out[j] = range > 0.0 ? std::clamp((v[j] - lo_[j]) / range, 0.0, 1.0) : 0.0;
  }
  return out;
}

FeatureVector Normalizer::apply(const FeatureVector& v) const {
  FeatureVector out = v;
  const auto scaled = apply(std::span<const double>(v.x));
  std::copy(scaled.begin(), scaled.end(), out.x.begin());
  return out;
}

}  // namespace mkldd
