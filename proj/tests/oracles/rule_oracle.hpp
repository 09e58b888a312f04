#pragma once

// Verdict at position i, written directly from the four cases: agreement
// wins; an S-SMKL attack overrides; an M-SMKL attack alone needs the next n
// M-SMKL labels (as many as remain) to all be attack.

#include <cstddef>
#include <span>

#include "mkldd/features.hpp"

namespace oracle {

inline mkldd::Label arbitrate_at(std::span<const mkldd::Label> m, std::span<const mkldd::Label> s, std::size_t i,
                                 int n) {
  using mkldd::Label;
  const bool m_attack = m[i] == Label::kAttack;
  const bool s_attack = s[i] == Label::kAttack;
  if (m_attack == s_attack) return m[i];
  if (s_attack) return Label::kAttack;
  std::size_t end = i + static_cast<std::size_t>(n);
  if (end > m.size()) end = m.size();
  for (std::size_t k = i; k < end; ++k) {
    if (m[k] != Label::kAttack) return Label::kNormal;
  }
  return Label::kAttack;
}

}  // namespace oracle
