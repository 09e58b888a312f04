#include "mkldd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mkldd/error.hpp"
#include "mkldd/rng.hpp"

namespace mkldd {

namespace {

std::string client_addr(std::uint64_t k) { return "192.168." + std::to_string(k / 250) + "." + std::to_string(k % 250 + 2); }
std::string server_addr(std::uint64_t k) { return "10.0.0." + std::to_string(k + 1); }
std::string attacker_addr(std::uint64_t k) { return "172.16." + std::to_string(k / 250) + "." + std::to_string(k % 250 + 1); }
std::string external_addr(std::uint64_t k) { return "203.0.113." + std::to_string(k + 1); }

constexpr std::uint16_t kServicePorts[] = {80, 443, 22, 53, 8080};

}  // namespace

void TrafficProfile::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("synth: duration must be positive");
  if (!(attack_start >= 0.0)) throw ConfigError("synth: attack_start must be non-negative");
  if (!(attack_ramp >= 0.0)) throw ConfigError("synth: attack_ramp must be non-negative");
  if (normal_clients < 1 || normal_servers < 1) throw ConfigError("synth: need at least one client and server");
  if (attackers < 0) throw ConfigError("synth: attackers must be non-negative");
  if (!(session_rate >= 0.0) || !(one_way_rate >= 0.0) || !(attack_rate >= 0.0)) {
    throw ConfigError("synth: rates must be non-negative");
  }
}

std::vector<PacketRecord> synth_traffic(const TrafficProfile& profile, std::uint64_t seed) {
  profile.validate();
  Rng rng(seed);
  std::vector<PacketRecord> out;
  const auto clients = static_cast<std::uint64_t>(profile.normal_clients);
  const auto servers = static_cast<std::uint64_t>(profile.normal_servers);
  const auto seconds = static_cast<long>(std::ceil(profile.duration));

  const auto emit = [&](double t, std::string src, std::string dst, std::uint16_t sport, std::uint16_t dport,
                        std::uint64_t size) {
    if (t >= profile.duration) return;
    out.push_back({t, std::move(src), std::move(dst), sport, dport, size, "TCP"});
  };

  for (long sec = 0; sec < seconds; ++sec) {
    const double base = static_cast<double>(sec);

    // Each client mostly talks to one of two "home" servers.
    const auto exchanges = rng.poisson(profile.session_rate);
    for (std::uint64_t e = 0; e < exchanges; ++e) {
      const auto c = rng.below(clients);
      const auto s = (c + rng.below(2)) % servers;
      const auto service = kServicePorts[rng.below(std::size(kServicePorts))];
      const auto eport = static_cast<std::uint16_t>(32768 + rng.below(28000));
      double t = base + rng.uniform() * 0.9;
      const auto requests = 1 + rng.below(3);
      for (std::uint64_t k = 0; k < requests; ++k) {
        emit(t, client_addr(c), server_addr(s), eport, service, 60 + rng.below(500));
        t += 0.001 + rng.uniform() * 0.01;
        emit(t, server_addr(s), client_addr(c), service, eport, 200 + rng.below(1200));
        t += 0.001 + rng.uniform() * 0.01;
      }
    }

    const auto strays = rng.poisson(profile.one_way_rate);
    for (std::uint64_t e = 0; e < strays; ++e) {
      const auto c = rng.below(clients);
      emit(base + rng.uniform(), client_addr(c), external_addr(rng.below(16)),
           static_cast<std::uint16_t>(32768 + rng.below(28000)), kServicePorts[rng.below(std::size(kServicePorts))],
           60 + rng.below(100));
    }

    if (profile.attackers > 0 && base + 1.0 > profile.attack_start) {
      const double into = base + 0.5 - profile.attack_start;
      double strength = 1.0;
      if (profile.attack_ramp > 0.0) strength = std::clamp(into / profile.attack_ramp, 0.0, 1.0);
      const auto floods = rng.poisson(profile.attack_rate * strength);
      const auto pool = static_cast<std::uint64_t>(profile.attackers);
      for (std::uint64_t e = 0; e < floods; ++e) {
        const double t = base + rng.uniform();
        const auto a = rng.below(pool);
        const auto sport = static_cast<std::uint16_t>(1024 + rng.below(64000));
        const auto dport = static_cast<std::uint16_t>(1 + rng.below(65535));
        if (t < profile.attack_start) continue;
        emit(t, attacker_addr(a), server_addr(0), sport, dport, 40 + rng.below(20));
      }
    }
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const PacketRecord& a, const PacketRecord& b) { return a.time < b.time; });
  return out;
}

}  // namespace mkldd
