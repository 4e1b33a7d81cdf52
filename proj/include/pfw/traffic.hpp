#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "pfw/model.hpp"

namespace pfw {

enum class MatchMode { kUniform, kWorstCase };

// Homogeneous traffic: one protocol, fixed subnets, uniform ports.
struct TrafficProfile {
  std::size_t count = 0;
  std::uint64_t seed = 1;
  Protocol proto = Protocol::kTcp;
  CidrMatcher src_subnet = CidrMatcher::normalized(0x0a000000u, 8);   // 10.0.0.0/8
  CidrMatcher dst_subnet = CidrMatcher::normalized(0xc0a80000u, 16);  // 192.168.0.0/16
  PortRange sport_range{1024, 65535};
  PortRange dport_range{0, 1023};
  MatchMode match_mode = MatchMode::kUniform;
};

// Profile used for worst-case runs: destination ports span the full range,
// so a port outside every rule's dport range usually exists.
TrafficProfile worst_case_profile(std::size_t count, std::uint64_t seed);

struct WildcardProbabilities {
  double proto = 0.25;
  double src = 0.5;
  double sport = 0.75;
  double dst = 0.25;
  double dport = 0.0;

  static constexpr WildcardProbabilities all(double p) { return {p, p, p, p, p}; }
};

struct RulesetGenParams {
  std::size_t count = 0;
  std::uint64_t seed = 1;
  WildcardProbabilities wildcard;
  double accept_fraction = 0.5;
  // Concrete fields are drawn inside these spaces.
  CidrMatcher src_space = CidrMatcher::normalized(0x0a000000u, 8);
  CidrMatcher dst_space = CidrMatcher::normalized(0xc0a80000u, 16);
  PortRange sport_space{1024, 65535};
  PortRange dport_space{0, 1023};
  std::uint16_t max_port_span = 255;
};

// Deterministic per profile; ids are 0..count-1. Packet fields are drawn in
// the order src_ip, src_port, dst_ip, dst_port.
//
// kWorstCase needs the companion ruleset and produces packets it matches
// nowhere: up to kWorstCaseAttempts uniform draws per packet, then the last
// draw with its destination port moved outside every non-wildcard dport
// range. Throws GenerationError when that still matches.
std::vector<Packet> generate_traffic(const TrafficProfile& profile);
std::vector<Packet> generate_traffic(const TrafficProfile& profile, const Ruleset& companion);

inline constexpr int kWorstCaseAttempts = 10000;

// Per rule: action, proto, src, sport, dst, dport, each field first
// drawing its wildcard coin.
Ruleset generate_ruleset(const RulesetGenParams& params);

inline constexpr std::string_view kTrafficCsvHeader = "id,proto,src_ip,src_port,dst_ip,dst_port";

std::string format_traffic_csv(const std::vector<Packet>& packets);
std::vector<Packet> parse_traffic_csv(std::string_view text);
void save_traffic(const std::vector<Packet>& packets, const std::filesystem::path& path);
std::vector<Packet> load_traffic(const std::filesystem::path& path);

}  // namespace pfw
