#include <sstream>

#include "doctest.h"
#include "mkldd/ensemble.hpp"
#include "mkldd/error.hpp"
#include "oracles/rule_oracle.hpp"

using namespace mkldd;

namespace {

constexpr Label N = Label::kNormal;
constexpr Label A = Label::kAttack;

}  // namespace

TEST_CASE("the four cases") {
  const DetectorConfig cfg;
  auto v = arbitrate(std::vector<Label>{N}, std::vector<Label>{N}, cfg);
  CHECK(v[0].label == N);
  CHECK(v[0].rule == VerdictRule::kBothNormal);
  v = arbitrate(std::vector<Label>{N}, std::vector<Label>{A}, cfg);
  CHECK(v[0].label == A);
  CHECK(v[0].rule == VerdictRule::kSOverrides);
  v = arbitrate(std::vector<Label>{A}, std::vector<Label>{A}, cfg);
  CHECK(v[0].label == A);
  CHECK(v[0].rule == VerdictRule::kBothAttack);
}

TEST_CASE("window vote over the next n M labels") {
  DetectorConfig cfg;
  cfg.window_n = 3;
  const std::vector<Label> m = {A, A, A, N};
  const std::vector<Label> s = {N, N, N, N};
  const auto v = arbitrate(m, s, cfg);
  REQUIRE(v.size() == 4);
  CHECK(v[0].rule == VerdictRule::kWindowVote);
  CHECK(v[0].label == A);  // positions 0..2 all attack
  CHECK(v[1].label == N);  // positions 1..3 include a normal
  CHECK(v[2].label == N);
  CHECK(v[3].rule == VerdictRule::kBothNormal);

  // A truncated window at the end of the stream still votes.
  const auto tail = arbitrate(std::vector<Label>{N, A, A}, std::vector<Label>{N, N, N}, cfg);
  CHECK(tail[1].label == A);
  CHECK(tail[2].label == A);
}

TEST_CASE("window of one: the M label decides") {
  DetectorConfig cfg;
  cfg.window_n = 1;
  const auto v = arbitrate(std::vector<Label>{A, N}, std::vector<Label>{N, N}, cfg);
  CHECK(v[0].label == A);
  CHECK(v[1].label == N);
}

TEST_CASE("exhaustive comparison with the independent rule") {
  for (int n = 1; n <= 4; ++n) {
    for (int len = 0; len <= 6; ++len) {
      const auto r = exhaustive_rule_check(n, len, oracle::arbitrate_at);
      INFO(r.first_mismatch);
      CHECK(r.ok());
      CHECK(r.streams == (1u << len) * (1u << len));
    }
  }
  CHECK(exhaustive_rule_check(2, 2).ok());
}

TEST_CASE("a wrong rule is caught") {
  // Lets M-SMKL's normal label win over an S-SMKL attack.
  const RuleOracle wrong = [](std::span<const Label> m, std::span<const Label> s, std::size_t i, int n) {
    return m[i] == N ? N : oracle::arbitrate_at(m, s, i, n);
  };
  const auto r = exhaustive_rule_check(2, 3, wrong);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.first_mismatch.empty());
}

TEST_CASE("rule properties") {
  const int len = 6;
  for (std::uint32_t mb = 0; mb < (1u << len); ++mb) {
    for (std::uint32_t sb = 0; sb < (1u << len); ++sb) {
      std::vector<Label> m(len), s(len);
      for (int k = 0; k < len; ++k) {
        m[k] = (mb >> k) & 1 ? A : N;
        s[k] = (sb >> k) & 1 ? A : N;
      }
      DetectorConfig cfg;
      cfg.window_n = 3;
      const auto v = arbitrate(m, s, cfg);
      REQUIRE(v.size() == static_cast<std::size_t>(len));
      for (int i = 0; i < len; ++i) {
        if (m[i] == s[i]) CHECK(v[i].label == m[i]);
        if (s[i] == A) CHECK(v[i].label == A);
        // Turning an attack M label into normal never turns a verdict into attack.
        for (int k = i; k < std::min(len, i + 3); ++k) {
          if (m[k] != A || k == i) continue;
          auto m2 = m;
          m2[k] = N;
          const auto v2 = arbitrate(m2, s, cfg);
          if (v[i].label == N) CHECK(v2[i].label == N);
        }
      }
    }
  }
}

TEST_CASE("empty streams and mismatched lengths") {
  CHECK(arbitrate({}, {}, {}).empty());
  CHECK_THROWS_AS(arbitrate(std::vector<Label>{N}, {}, {}), ConfigError);
  DetectorConfig bad;
  bad.window_n = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("verdict CSV") {
  const auto v = arbitrate(std::vector<Label>{A, N}, std::vector<Label>{N, A}, {});
  std::ostringstream out;
  write_verdict_csv(out, v);
  CHECK(out.str() ==
        "index,window_start,m_label,s_label,rule,final_label\n"
        "0,0,-1,1,window-vote,1\n"
        "1,0,1,-1,s-overrides,-1\n");
}
