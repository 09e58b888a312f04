#pragma once

#include <cstdint>
#include <vector>

#include "mkldd/flow.hpp"

namespace mkldd {

/// Shape of a generated trace. Normal traffic is request/response exchanges
/// between a client pool and a few servers, plus occasional one-way packets.
/// From `attack_start` on, a pool of spoofed sources floods one victim server
/// with single-direction packets to scattered ports; the flood rate ramps
/// linearly to `attack_rate` over `attack_ramp` seconds.
struct TrafficProfile {
  double duration = 240.0;       // seconds
  double attack_start = 120.0;   // seconds; >= duration means no attack
  double attack_ramp = 0.0;      // seconds
  int normal_clients = 40;
  int normal_servers = 8;
  double session_rate = 6.0;     // exchanges per second
  double one_way_rate = 1.0;     // unanswered packets per second
  int attackers = 300;           // 0 disables the attack
  double attack_rate = 150.0;    // flood packets per second at full strength

  void validate() const;
  bool operator==(const TrafficProfile&) const = default;
};

/// Deterministic for a given (profile, seed); packets are time-ordered.
std::vector<PacketRecord> synth_traffic(const TrafficProfile& profile, std::uint64_t seed);

}  // namespace mkldd
