#pragma once

// Test-only helpers. The oracle here deliberately avoids the library's
// matching code: CIDR membership uses the shift form, and classification
// tests every rule before picking the lowest matching index.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pfw/model.hpp"

namespace pfw::testing {

inline bool oracle_cidr(std::uint32_t base, unsigned prefix_len, std::uint32_t ip) {
  if (prefix_len == 0) return true;
  const unsigned shift = 32 - prefix_len;
  return (ip >> shift) == (base >> shift);
}

inline bool oracle_match(const Rule& r, const Packet& p) {
  const bool proto = r.proto == Protocol::kAny || r.proto == p.proto;
  const bool src = oracle_cidr(r.src.base, r.src.prefix_len, p.src_ip);
  const bool dst = oracle_cidr(r.dst.base, r.dst.prefix_len, p.dst_ip);
  const bool sport = p.src_port >= r.sport.lo && p.src_port <= r.sport.hi;
  const bool dport = p.dst_port >= r.dport.lo && p.dst_port <= r.dport.hi;
  return proto && src && dst && sport && dport;
}

struct OracleVerdict {
  Action verdict;
  std::optional<std::uint32_t> index;
};

inline OracleVerdict oracle_classify(const Ruleset& rs, const Packet& p) {
  std::vector<std::uint32_t> hits;
  for (std::uint32_t i = 0; i < rs.rules.size(); ++i) {
    if (oracle_match(rs.rules[i], p)) hits.push_back(i);
  }
  if (hits.empty()) return {Action::kDrop, std::nullopt};
  std::uint32_t lowest = hits.front();
  for (auto h : hits) lowest = h < lowest ? h : lowest;
  return {rs.rules[lowest].action, lowest};
}

// Random rules biased toward a small address/port universe so that matches
// are common. Uses the standard engine, not the library's generator.
class RandomCases {
 public:
  explicit RandomCases(std::uint64_t seed) : rng_(seed) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(rng_()); }
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(rng_() % n); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

  std::uint32_t address() { return 0x0a000000u | (u32() & 0x0000ff0fu); }
  std::uint16_t port() { return static_cast<std::uint16_t>(coin(0.5) ? below(16) : below(65536)); }

  CidrMatcher cidr() {
    if (coin(0.3)) return CidrMatcher::any();
    const unsigned len = below(33);
    return CidrMatcher::normalized(address(), len);
  }

  PortRange ports() {
    if (coin(0.3)) return PortRange::any();
    std::uint16_t a = port();
    std::uint16_t b = coin(0.5) ? a : port();
    if (a > b) std::swap(a, b);
    return {a, b};
  }

  Rule rule() {
    Rule r;
    r.action = coin(0.5) ? Action::kAccept : Action::kDrop;
    r.proto = static_cast<Protocol>(below(4));
    r.src = cidr();
    r.sport = ports();
    r.dst = cidr();
    r.dport = ports();
    return r;
  }

  Ruleset ruleset(std::size_t n) {
    Ruleset rs;
    for (std::size_t i = 0; i < n; ++i) rs.rules.push_back(rule());
    return rs;
  }

  Packet packet(std::uint64_t id = 0) {
    Packet p;
    p.id = id;
    p.proto = static_cast<Protocol>(below(3));
    p.src_ip = address();
    p.src_port = port();
    p.dst_ip = address();
    p.dst_port = port();
    return p;
  }

  std::vector<Packet> packets(std::size_t n) {
    std::vector<Packet> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(packet(i));
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace pfw::testing
