#include "mkldd/packet_csv.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mkldd/error.hpp"
#include "text_util.hpp"

namespace mkldd {

namespace {

std::optional<PacketRecord> parse_row(std::string_view line, std::string& why) {
  const auto cols = detail::split(line, ',');
  if (cols.size() != 7) {
    why = "expected 7 columns, got " + std::to_string(cols.size());
    return std::nullopt;
  }
  PacketRecord rec;
  const auto t = detail::parse_double(cols[0]);
  if (!t || !std::isfinite(*t) || *t < 0.0) {
    why = "time is not a finite non-negative number";
    return std::nullopt;
  }
  rec.time = *t;
  rec.src_ip = std::string(detail::trim(cols[1]));
  rec.dst_ip = std::string(detail::trim(cols[2]));
  if (rec.src_ip.empty() || rec.dst_ip.empty()) {
    why = "empty address";
    return std::nullopt;
  }
  const auto sport = detail::parse_int<std::uint16_t>(cols[3]);
  const auto dport = detail::parse_int<std::uint16_t>(cols[4]);
  if (!sport || !dport) {
    why = "port is not an integer in 0..65535";
    return std::nullopt;
  }
  rec.src_port = *sport;
  rec.dst_port = *dport;
  const auto size = detail::parse_int<std::uint64_t>(cols[5]);
  if (!size) {
    why = "size is not a non-negative integer";
    return std::nullopt;
  }
  rec.size = *size;
  rec.proto = std::string(detail::trim(cols[6]));
  if (rec.proto.empty()) {
    why = "empty protocol";
    return std::nullopt;
  }
  return rec;
}

}  // namespace

PacketCsv read_packet_csv(std::istream& in, const CsvReadOptions& opts) {
  PacketCsv out;
  std::string line;
  if (!std::getline(in, line)) return out;  // a zero-byte file holds no packets
  if (detail::trim(line) != kPacketCsvHeader) {
    throw DataError(std::string("line 1: missing or invalid header, expected '") + kPacketCsvHeader +
                    "'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    std::string why;
    auto rec = parse_row(line, why);
    if (!rec) {
      std::string msg = "line " + std::to_string(lineno) + ": " + why;
      if (opts.strict) throw DataError(msg);
      out.diagnostics.push_back(std::move(msg));
      continue;
    }
    out.packets.push_back(std::move(*rec));
  }
  return out;
}

PacketCsv read_packet_csv_file(const std::string& path, const CsvReadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open packet file '" + path + "'");
  return read_packet_csv(in, opts);
}

void write_packet_csv(std::ostream& out, const std::vector<PacketRecord>& packets) {
  out << kPacketCsvHeader << '\n';
  for (const auto& p : packets) {
    out << detail::format_double(p.time) << ',' << p.src_ip << ',' << p.dst_ip << ',' << p.src_port
        << ',' << p.dst_port << ',' << p.size << ',' << p.proto << '\n';
  }
}

void write_packet_csv_file(const std::string& path, const std::vector<PacketRecord>& packets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write packet file '" + path + "'");
  write_packet_csv(out, packets);
}

}  // namespace mkldd
