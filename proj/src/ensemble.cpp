#include "mkldd/ensemble.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "mkldd/error.hpp"
#include "text_util.hpp"

namespace mkldd {

void DetectorConfig::validate() const {
  if (window_n < 1) throw ConfigError("sliding window size must be at least 1");
}

const char* rule_name(VerdictRule r) {
  switch (r) {
    case VerdictRule::kBothNormal:
      return "both-normal";
    case VerdictRule::kBothAttack:
      return "both-attack";
    case VerdictRule::kSOverrides:
      return "s-overrides";
    case VerdictRule::kWindowVote:
      break;
  }
  return "window-vote";
}

std::vector<Verdict> arbitrate(std::span<const Label> m_labels, std::span<const Label> s_labels,
                               const DetectorConfig& cfg) {
  cfg.validate();
  if (m_labels.size() != s_labels.size()) throw ConfigError("arbitrate: label streams differ in length");
  const std::size_t len = m_labels.size();
  const auto n = static_cast<std::size_t>(cfg.window_n);

  std::vector<Verdict> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    auto& v = out[i];
    v.index = i;
    v.m_label = m_labels[i];
    v.s_label = s_labels[i];
    const bool m_attack = m_labels[i] == Label::kAttack;
    const bool s_attack = s_labels[i] == Label::kAttack;
    if (!m_attack && !s_attack) {
      v.rule = VerdictRule::kBothNormal;
      v.label = Label::kNormal;
    } else if (m_attack && s_attack) {
      v.rule = VerdictRule::kBothAttack;
      v.label = Label::kAttack;
    } else if (s_attack) {
      v.rule = VerdictRule::kSOverrides;
      v.label = Label::kAttack;
    } else {
      v.rule = VerdictRule::kWindowVote;
      const std::size_t end = std::min(len, i + n);
      const bool all_attack = std::all_of(m_labels.begin() + static_cast<std::ptrdiff_t>(i),
                                          m_labels.begin() + static_cast<std::ptrdiff_t>(end),
                                          [](Label l) { return l == Label::kAttack; });
      v.label = all_attack ? Label::kAttack : Label::kNormal;
    }
  }
  return out;
}

std::vector<Verdict> classify_stream(const MklModel& m_model, const MklModel& s_model,
                                     std::span<const FeatureVector> stream, const DetectorConfig& cfg) {
  std::vector<Label> m_labels;
  std::vector<Label> s_labels;
  m_labels.reserve(stream.size());
  s_labels.reserve(stream.size());
  for (const auto& x : stream) {
    m_labels.push_back(classify(m_model, x));
    s_labels.push_back(classify(s_model, x));
  }
  auto verdicts = arbitrate(m_labels, s_labels, cfg);
  for (std::size_t i = 0; i < stream.size(); ++i) verdicts[i].window_start = stream[i].window_start;
  return verdicts;
}

Label reference_rule(std::span<const Label> m, std::span<const Label> s, std::size_t i, int n) {
  // rows: M label, columns: S label; 0 normal, 1 attack, 2 consult the window
  static constexpr int kTable[2][2] = {{0, 1}, {2, 1}};
  const int mi = m[i] == Label::kAttack ? 1 : 0;
  const int si = s[i] == Label::kAttack ? 1 : 0;
  const int action = kTable[mi][si];
  if (action != 2) return action == 1 ? Label::kAttack : Label::kNormal;
  std::size_t attacks = 0;
  std::size_t seen = 0;
  for (std::size_t k = i; k < m.size() && seen < static_cast<std::size_t>(n); ++k, ++seen) {
    attacks += m[k] == Label::kAttack ? 1 : 0;
  }
  return attacks == seen ? Label::kAttack : Label::kNormal;
}

RuleCheckReport exhaustive_rule_check(int n, int len, const RuleOracle& oracle) {
  if (n < 1 || len < 0 || len > 16) throw ConfigError("exhaustive_rule_check: bounds out of range");
  const RuleOracle& check = oracle ? oracle : RuleOracle(reference_rule);
  RuleCheckReport report;
  const std::uint32_t combos = 1u << len;
  const auto decode = [len](std::uint32_t bits) {
    std::vector<Label> out(static_cast<std::size_t>(len));
    for (int k = 0; k < len; ++k) out[static_cast<std::size_t>(k)] = (bits >> k) & 1u ? Label::kAttack : Label::kNormal;
    return out;
  };
  DetectorConfig cfg;
  cfg.window_n = n;
  for (std::uint32_t mb = 0; mb < combos; ++mb) {
    const auto m = decode(mb);
    for (std::uint32_t sb = 0; sb < combos; ++sb) {
      const auto s = decode(sb);
      const auto verdicts = arbitrate(m, s, cfg);
      ++report.streams;
      for (std::size_t i = 0; i < verdicts.size(); ++i) {
        ++report.positions;
        const Label want = check(m, s, i, n);
        if (verdicts[i].label != want) {
          if (report.mismatches == 0) {
            std::ostringstream msg;
            msg << "n=" << n << " len=" << len << " m=" << mb << " s=" << sb << " i=" << i;
            report.first_mismatch = msg.str();
          }
          ++report.mismatches;
        }
      }
    }
  }
  return report;
}

void write_verdict_csv(std::ostream& out, std::span<const Verdict> verdicts) {
  out << "index,window_start,m_label,s_label,rule,final_label\n";
  for (const auto& v : verdicts) {
    out << v.index << ',' << detail::format_double(v.window_start) << ',' << to_int(v.m_label) << ','
        << to_int(v.s_label) << ',' << rule_name(v.rule) << ',' << to_int(v.label) << '\n';
  }
}

}  // namespace mkldd
