#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mkldd {

/// One observed packet. Addresses are opaque tokens compared as strings, so
/// IPv4, IPv6 and anonymized identifiers all work without parsing.
struct PacketRecord {
  double time = 0.0;  // seconds
  std::string src_ip;
  std::string dst_ip;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint64_t size = 0;
  std::string proto = "TCP";

  bool operator==(const PacketRecord&) const = default;
};

/// Packets falling in [start, start + delta_t), ordered by time with input
/// order breaking ties.
struct FlowWindow {
  double start = 0.0;
  double delta_t = 1.0;
  std::vector<PacketRecord> packets;
};

using PacketList = std::vector<PacketRecord>;
using AddressPair = std::pair<std::string, std::string>;

/// The six class families of one window. All maps are ordered by address
/// token so iteration order is canonical.
///
///   sd       (src, dst)  -> packets from src to dst
///   ips      src         -> packets sent by src
///   ipd      dst         -> packets received by dst
///   if_flows src         -> packets sent by an address that also receives
///   sh       src         -> packets sent by an address that never receives
///   dh       dst         -> packets received by an address that never sends
struct ClassPartition {
  std::map<AddressPair, PacketList> sd;
  std::map<std::string, PacketList> ips;
  std::map<std::string, PacketList> ipd;
  std::map<std::string, PacketList> if_flows;
  std::map<std::string, PacketList> sh;
  std::map<std::string, PacketList> dh;
};

/// Splits a packet stream into consecutive windows aligned to multiples of
/// delta_t. Windows run from floor(t_min / delta_t) to the last populated
/// window; empty windows in between are emitted. Records with a non-finite
/// or negative time are dropped and described in `diagnostics` when given.
std::vector<FlowWindow> partition_stream(std::span<const PacketRecord> packets, double delta_t,
                                         std::vector<std::string>* diagnostics = nullptr);

ClassPartition build_partition(const FlowWindow& window);
ClassPartition build_partition(std::span<const PacketRecord> packets);

/// Number of distinct destination ports.
std::size_t distinct_ports(std::span<const PacketRecord> packets);

}  // namespace mkldd
