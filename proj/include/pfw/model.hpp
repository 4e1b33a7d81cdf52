#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfw {

enum class Action : std::uint8_t { kAccept, kDrop };

// Packet protocols are always concrete; kAny only appears in rules.
enum class Protocol : std::uint8_t { kTcp = 0, kUdp = 1, kIcmp = 2, kAny = 3 };

using Ipv4 = std::uint32_t;

std::string_view to_string(Action action);
std::string_view to_string(Protocol proto);

std::string format_ipv4(Ipv4 addr);
// Strict dotted quad: four decimal octets 0..255, nothing else.
std::optional<Ipv4> parse_ipv4(std::string_view text);

// Netmask for a prefix length in 0..32; len 0 yields 0 without a 32-bit shift.
constexpr Ipv4 prefix_mask(unsigned prefix_len) {
  return prefix_len == 0 ? 0u : ~Ipv4{0} << (32 - prefix_len);
}

struct CidrMatcher {
  Ipv4 base = 0;
  std::uint8_t prefix_len = 0;

  static constexpr CidrMatcher any() { return {}; }
  // Zeroes host bits; prefix_len must already be <= 32.
  static constexpr CidrMatcher normalized(Ipv4 base, unsigned prefix_len) {
    return {base & prefix_mask(prefix_len), static_cast<std::uint8_t>(prefix_len)};
  }

  constexpr Ipv4 mask() const { return prefix_mask(prefix_len); }
  constexpr bool is_wildcard() const { return prefix_len == 0; }
  constexpr bool contains(Ipv4 addr) const { return (addr & mask()) == base; }
  constexpr Ipv4 host_mask() const { return ~mask(); }

  friend constexpr bool operator==(const CidrMatcher&, const CidrMatcher&) = default;
};

// Inclusive range; lo <= hi.
struct PortRange {
  std::uint16_t lo = 0;
  std::uint16_t hi = 65535;

  static constexpr PortRange any() { return {}; }
  static constexpr PortRange single(std::uint16_t port) { return {port, port}; }

  constexpr bool is_wildcard() const { return lo == 0 && hi == 65535; }
  constexpr bool contains(std::uint16_t port) const { return lo <= port && port <= hi; }

  friend constexpr bool operator==(const PortRange&, const PortRange&) = default;
};

struct Rule {
  Action action = Action::kDrop;
  Protocol proto = Protocol::kAny;
  CidrMatcher src;
  PortRange sport;
  CidrMatcher dst;
  PortRange dport;

  friend constexpr bool operator==(const Rule&, const Rule&) = default;
};

// Index 0 has the highest priority. Packets matching no rule are dropped.
struct Ruleset {
  std::vector<Rule> rules;

  std::size_t size() const { return rules.size(); }
  bool empty() const { return rules.empty(); }

  friend bool operator==(const Ruleset&, const Ruleset&) = default;
};

struct Packet {
  std::uint64_t id = 0;
  Protocol proto = Protocol::kTcp;
  Ipv4 src_ip = 0;
  std::uint16_t src_port = 0;
  Ipv4 dst_ip = 0;
  std::uint16_t dst_port = 0;

  friend constexpr bool operator==(const Packet&, const Packet&) = default;
};

inline constexpr Action kDefaultVerdict = Action::kDrop;

struct MatchResult {
  Action verdict = kDefaultVerdict;
  std::optional<std::uint32_t> matched_index;
  // Rules examined. For partitioned engines this sums over all partitions.
  std::uint64_t comparisons = 0;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

constexpr bool protocol_matches(Protocol rule_proto, Protocol packet_proto) {
  return rule_proto == Protocol::kAny || rule_proto == packet_proto;
}

constexpr bool rule_matches(const Rule& rule, const Packet& packet) {
  return protocol_matches(rule.proto, packet.proto) && rule.src.contains(packet.src_ip) &&
         rule.dst.contains(packet.dst_ip) && rule.sport.contains(packet.src_port) &&
         rule.dport.contains(packet.dst_port);
}

}  // namespace pfw
