#pragma once

// Random small packet windows for the feature oracle comparisons.

#include <string>
#include <vector>

#include "mkldd/flow.hpp"
#include "mkldd/rng.hpp"

namespace oracle {

inline std::vector<mkldd::PacketRecord> random_window(mkldd::Rng& rng, std::size_t max_packets = 30,
                                                       std::size_t max_addrs = 5, std::size_t max_ports = 5,
                                                       double start = 0.0, double delta_t = 1.0) {
  const auto addrs = 1 + rng.below(max_addrs);
  const auto ports = 1 + rng.below(max_ports);
  const auto n = rng.below(max_packets + 1);
  std::vector<mkldd::PacketRecord> out;
  for (std::uint64_t k = 0; k < n; ++k) {
    mkldd::PacketRecord p;
    p.time = start + delta_t * rng.uniform();
    p.src_ip = "10.0.0." + std::to_string(rng.below(addrs));
    p.dst_ip = "10.0.0." + std::to_string(rng.below(addrs));
    if (p.src_ip == p.dst_ip && rng.below(2) == 0) {
      p.dst_ip = "10.0.0." + std::to_string((rng.below(addrs) + 1) % addrs);
    }
    p.src_port = static_cast<std::uint16_t>(1024 + rng.below(100));
    p.dst_port = static_cast<std::uint16_t>(80 + rng.below(ports));
    p.size = 40 + rng.below(1460);
    out.push_back(p);
  }
  return out;
}

}  // namespace oracle
