#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mkldd/features.hpp"
#include "mkldd/simple_mkl.hpp"

namespace mkldd {

struct DetectorConfig {
  int window_n = 8;
  void validate() const;
  bool operator==(const DetectorConfig&) const = default;
};

enum class VerdictRule { kBothNormal, kBothAttack, kSOverrides, kWindowVote };
const char* rule_name(VerdictRule r);

struct Verdict {
  std::size_t index = 0;
  double window_start = 0.0;
  Label m_label = Label::kNormal;
  Label s_label = Label::kNormal;
  Label label = Label::kNormal;
  VerdictRule rule = VerdictRule::kBothNormal;
};

/// Combines the M-SMKL labels (first classification) and S-SMKL labels
/// (second classification) position by position:
///   both normal        -> normal
///   both attack        -> attack
///   M normal, S attack -> attack
///   M attack, S normal -> attack iff M labels i .. i+n-1 are all attack
///                         (window truncated at the end of the stream)
std::vector<Verdict> arbitrate(std::span<const Label> m_labels, std::span<const Label> s_labels,
                               const DetectorConfig& cfg);

/// Scores the stream with both models (each applies its own normalizer and
/// feature weights) and arbitrates.
std::vector<Verdict> classify_stream(const MklModel& m_model, const MklModel& s_model,
                                     std::span<const FeatureVector> stream, const DetectorConfig& cfg);

/// Decides the verdict at position i of a stream from the two label
/// sequences and the window size.
using RuleOracle =
    std::function<Label(std::span<const Label> m, std::span<const Label> s, std::size_t i, int n)>;

/// Table-driven restatement of the arbitration rule, kept separate from
/// arbitrate() so the two can be checked against each other.
Label reference_rule(std::span<const Label> m, std::span<const Label> s, std::size_t i, int n);

struct RuleCheckReport {
  std::size_t streams = 0;     // label-pair streams enumerated
  std::size_t positions = 0;   // verdicts compared
  std::size_t mismatches = 0;
  std::string first_mismatch;
  bool ok() const { return mismatches == 0; }
};

/// Enumerates all 2^len x 2^len label-sequence pairs and compares arbitrate()
/// with `oracle` (reference_rule when empty) at every position.
RuleCheckReport exhaustive_rule_check(int n, int len, const RuleOracle& oracle = {});

/// `index,window_start,m_label,s_label,rule,final_label`
void write_verdict_csv(std::ostream& out, std::span<const Verdict> verdicts);

}  // namespace mkldd
