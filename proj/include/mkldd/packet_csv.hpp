#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mkldd/flow.hpp"

namespace mkldd {

inline constexpr const char* kPacketCsvHeader = "time,src_ip,dst_ip,src_port,dst_port,size,proto";

struct CsvReadOptions {
  bool strict = true;  // abort on the first malformed line instead of skipping it
};

struct PacketCsv {
  std::vector<PacketRecord> packets;
  std::vector<std::string> diagnostics;  // "line N: ..." for every skipped line
};

/// Reads the packet CSV schema. A zero-byte input yields no packets; otherwise
/// a missing or wrong header is always fatal
/// (DataError mentioning line 1); malformed rows are fatal in strict mode and
/// skipped with a diagnostic otherwise.
PacketCsv read_packet_csv(std::istream& in, const CsvReadOptions& opts = {});
PacketCsv read_packet_csv_file(const std::string& path, const CsvReadOptions& opts = {});

void write_packet_csv(std::ostream& out, const std::vector<PacketRecord>& packets);
void write_packet_csv_file(const std::string& path, const std::vector<PacketRecord>& packets);

}  // namespace mkldd
