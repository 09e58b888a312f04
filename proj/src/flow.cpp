#include "mkldd/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mkldd/error.hpp"

namespace mkldd {

std::vector<FlowWindow> partition_stream(std::span<const PacketRecord> packets, double delta_t,
                                         std::vector<std::string>* diagnostics) {
  if (!(delta_t > 0.0) || !std::isfinite(delta_t)) {
    throw ConfigError("partition_stream: delta_t must be positive and finite");
  }

  std::vector<PacketRecord> valid;
  valid.reserve(packets.size());
  for (std::size_t i = 0; i < packets.size(); ++i) {
    const auto& p = packets[i];
    if (!std::isfinite(p.time) || p.time < 0.0) {
      if (diagnostics) {
        std::ostringstream msg;
        msg << "record " << i << ": rejected, time is not a finite non-negative number";
        diagnostics->push_back(msg.str());
      }
      continue;
    }
    valid.push_back(p);
  }
  if (valid.empty()) return {};

  std::stable_sort(valid.begin(), valid.end(),
                   [](const PacketRecord& a, const PacketRecord& b) { return a.time < b.time; });

  const auto slot = [delta_t](double t) { return static_cast<long long>(std::floor(t / delta_t)); };
  const long long first = slot(valid.front().time);
  const long long last = slot(valid.back().time);

  std::vector<FlowWindow> windows(static_cast<std::size_t>(last - first + 1));
  for (std::size_t k = 0; k < windows.size(); ++k) {
    windows[k].start = static_cast<double>(first + static_cast<long long>(k)) * delta_t;
    windows[k].delta_t = delta_t;
  }
  for (auto& p : valid) {
    windows[static_cast<std::size_t>(slot(p.time) - first)].packets.push_back(std::move(p));
  }
  return windows;
}

ClassPartition build_partition(std::span<const PacketRecord> packets) {
  ClassPartition part;
  for (const auto& p : packets) {
    part.sd[{p.src_ip, p.dst_ip}].push_back(p);
    part.ips[p.src_ip].push_back(p);
    part.ipd[p.dst_ip].push_back(p);
  }
  for (const auto& [src, list] : part.ips) {
    if (part.ipd.contains(src)) {
      part.if_flows.emplace(src, list);
    } else {
      part.sh.emplace(src, list);
    }
  }
  for (const auto& [dst, list] : part.ipd) {
    if (!part.ips.contains(dst)) part.dh.emplace(dst, list);
  }
  return part;
}

ClassPartition build_partition(const FlowWindow& window) { return build_partition(window.packets); }

std::size_t distinct_ports(std::span<const PacketRecord> packets) {
  std::set<std::uint16_t> ports;
  for (const auto& p : packets) ports.insert(p.dst_port);
  return ports.size();
}

}  // namespace mkldd
