#include "pfw/traffic.hpp"

#include <algorithm>
#include <bitset>
#include <charconv>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "pfw/errors.hpp"
#include "pfw/kernels.hpp"
#include "pfw/prng.hpp"

namespace pfw {
namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(name) + " probability must be in [0, 1]");
  }
}

void check_profile(const TrafficProfile& profile) {
  if (profile.proto == Protocol::kAny) throw ConfigError("traffic protocol must be concrete");
  if (profile.sport_range.lo > profile.sport_range.hi ||
      profile.dport_range.lo > profile.dport_range.hi) {
    throw ConfigError("inverted port range in traffic profile");
  }
  if (profile.src_subnet.prefix_len > 32 || profile.dst_subnet.prefix_len > 32) {
    throw ConfigError("prefix length exceeds 32 in traffic profile");
  }
}

Ipv4 draw_address(Xoshiro256& rng, const CidrMatcher& subnet) {
  return subnet.base | (static_cast<Ipv4>(rng.next()) & subnet.host_mask());
}

std::uint16_t draw_port(Xoshiro256& rng, const PortRange& range) {
  return static_cast<std::uint16_t>(range.lo + rng.below(range.hi - range.lo + 1u));
}

Packet draw_packet(Xoshiro256& rng, const TrafficProfile& profile, std::uint64_t id) {
  Packet p;
  p.id = id;
  p.proto = profile.proto;
  p.src_ip = draw_address(rng, profile.src_subnet);
  p.src_port = draw_port(rng, profile.sport_range);
  p.dst_ip = draw_address(rng, profile.dst_subnet);
  p.dst_port = draw_port(rng, profile.dport_range);
  return p;
}

// Smallest port in `range` outside every non-wildcard dport range, if any.
std::optional<std::uint16_t> escape_port(const Ruleset& ruleset, const PortRange& range) {
  auto covered = std::make_unique<std::bitset<65536>>();
  for (const Rule& r : ruleset.rules) {
    if (r.dport.is_wildcard()) continue;
    for (unsigned port = r.dport.lo; port <= r.dport.hi; ++port) covered->set(port);
  }
  for (unsigned port = range.lo; port <= range.hi; ++port) {
    if (!covered->test(port)) return static_cast<std::uint16_t>(port);
  }
  return std::nullopt;
}

std::vector<Packet> worst_case(const TrafficProfile& profile, const Ruleset& companion) {
  const RuleTable table(companion);
  const auto misses = [&](const Packet& p) {
    return !scan(table, 0, table.size(), PacketKey::from(p)).matched();
  };
  Xoshiro256 rng(profile.seed);
  std::optional<std::optional<std::uint16_t>> escape;  // computed on first need
  std::vector<Packet> packets;
  packets.reserve(profile.count);
  for (std::uint64_t id = 0; id < profile.count; ++id) {
    Packet candidate;
    bool found = false;
    for (int attempt = 0; attempt < kWorstCaseAttempts && !found; ++attempt) {
      candidate = draw_packet(rng, profile, id);
      found = misses(candidate);
    }
    if (!found) {
      if (!escape) escape = escape_port(companion, profile.dport_range);
      if (*escape) {
        candidate.dst_port = **escape;
        found = misses(candidate);
      }
    }
    if (!found) {
      throw GenerationError(
          "no non-matching packet exists within the traffic profile for this ruleset");
    }
    packets.push_back(candidate);
  }
  return packets;
}

CidrMatcher draw_cidr(Xoshiro256& rng, const CidrMatcher& space) {
  const unsigned len = space.prefix_len + static_cast<unsigned>(rng.below(33u - space.prefix_len));
  return CidrMatcher::normalized(draw_address(rng, space), len);
}

PortRange draw_range(Xoshiro256& rng, const PortRange& space, std::uint16_t max_span) {
  const std::uint16_t lo = draw_port(rng, space);
  if (rng.chance(0.5)) return PortRange::single(lo);
  const unsigned hi = std::min<unsigned>(space.hi, lo + static_cast<unsigned>(rng.below(max_span + 1u)));
  return {lo, static_cast<std::uint16_t>(hi)};
}

}  // namespace

TrafficProfile worst_case_profile(std::size_t count, std::uint64_t seed) {
  TrafficProfile profile;
  profile.count = count;
  profile.seed = seed;
  profile.dport_range = PortRange::any();
  profile.match_mode = MatchMode::kWorstCase;
  return profile;
}

std::vector<Packet> generate_traffic(const TrafficProfile& profile) {
  check_profile(profile);
  if (profile.match_mode == MatchMode::kWorstCase) {
    throw ConfigError("worst-case traffic needs a companion ruleset");
  }
  Xoshiro256 rng(profile.seed);
  std::vector<Packet> packets;
  packets.reserve(profile.count);
  for (std::uint64_t id = 0; id < profile.count; ++id) {
    packets.push_back(draw_packet(rng, profile, id));
  }
  return packets;
}

std::vector<Packet> generate_traffic(const TrafficProfile& profile, const Ruleset& companion) {
  check_profile(profile);
  if (profile.match_mode == MatchMode::kUniform) return generate_traffic(profile);
  return worst_case(profile, companion);
}

Ruleset generate_ruleset(const RulesetGenParams& params) {
  check_probability(params.wildcard.proto, "proto wildcard");
  check_probability(params.wildcard.src, "src wildcard");
  check_probability(params.wildcard.sport, "sport wildcard");
  check_probability(params.wildcard.dst, "dst wildcard");
  check_probability(params.wildcard.dport, "dport wildcard");
  check_probability(params.accept_fraction, "accept fraction");
  if (params.sport_space.lo > params.sport_space.hi ||
      params.dport_space.lo > params.dport_space.hi) {
    throw ConfigError("inverted port space");
  }

  Xoshiro256 rng(params.seed);
  Ruleset ruleset;
  ruleset.rules.reserve(params.count);
  for (std::size_t i = 0; i < params.count; ++i) {
    Rule r;
    r.action = rng.chance(params.accept_fraction) ? Action::kAccept : Action::kDrop;
    r.proto = rng.chance(params.wildcard.proto) ? Protocol::kAny
                                                : static_cast<Protocol>(rng.below(3));
    r.src = rng.chance(params.wildcard.src) ? CidrMatcher::any()
                                            : draw_cidr(rng, params.src_space);
    r.sport = rng.chance(params.wildcard.sport)
                  ? PortRange::any()
                  : draw_range(rng, params.sport_space, params.max_port_span);
    r.dst = rng.chance(params.wildcard.dst) ? CidrMatcher::any()
                                            : draw_cidr(rng, params.dst_space);
    r.dport = rng.chance(params.wildcard.dport)
                  ? PortRange::any()
                  : draw_range(rng, params.dport_space, params.max_port_span);
    ruleset.rules.push_back(r);
  }
  return ruleset;
}

std::string format_traffic_csv(const std::vector<Packet>& packets) {
  std::string out(kTrafficCsvHeader);
  out += '\n';
  for (const Packet& p : packets) {
    out += std::to_string(p.id);
    out += ',';
    out += to_string(p.proto);
    out += ',';
    out += format_ipv4(p.src_ip);
    out += ',';
    out += std::to_string(p.src_port);
    out += ',';
    out += format_ipv4(p.dst_ip);
    out += ',';
    out += std::to_string(p.dst_port);
    out += '\n';
  }
  return out;
}

namespace {

[[noreturn]] void row_error(std::size_t line, const std::string& msg) {
  throw ParseError("traffic line " + std::to_string(line) + ": " + msg, line);
}

template <typename T>
T parse_number(std::string_view field, std::uint64_t max, std::size_t line, const char* what) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || end != field.data() + field.size() ||
      (ec != std::errc{} && ec != std::errc::result_out_of_range)) {
    row_error(line, std::string("invalid ") + what + " '" + std::string(field) + "'");
  }
  if (ec == std::errc::result_out_of_range || value > max) {
    row_error(line, std::string(what) + " out of range: " + std::string(field));
  }
  return static_cast<T>(value);
}

}  // namespace

std::vector<Packet> parse_traffic_csv(std::string_view text) {
  std::vector<Packet> packets;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kTrafficCsvHeader) {
        row_error(line_no, "expected header '" + std::string(kTrafficCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    std::string_view fields[6];
    std::size_t n = 0;
    for (std::size_t pos = 0;; ++n) {
      const auto comma = line.find(',', pos);
      if (n < 6) fields[n] = line.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
      if (comma == std::string_view::npos) {
        ++n;
        break;
      }
      pos = comma + 1;
    }
    if (n != 6) row_error(line_no, "expected 6 fields, found " + std::to_string(n));

    Packet p;
    p.id = parse_number<std::uint64_t>(fields[0], ~std::uint64_t{0}, line_no, "id");
    if (fields[1] == "tcp") {
      p.proto = Protocol::kTcp;
    } else if (fields[1] == "udp") {
      p.proto = Protocol::kUdp;
    } else if (fields[1] == "icmp") {
      p.proto = Protocol::kIcmp;
    } else {
      row_error(line_no, "unknown protocol '" + std::string(fields[1]) + "'");
    }
    const auto src = parse_ipv4(fields[2]);
    if (!src) row_error(line_no, "invalid src_ip '" + std::string(fields[2]) + "'");
    p.src_ip = *src;
    p.src_port = parse_number<std::uint16_t>(fields[3], 65535, line_no, "src_port");
    const auto dst = parse_ipv4(fields[4]);
    if (!dst) row_error(line_no, "invalid dst_ip '" + std::string(fields[4]) + "'");
    p.dst_ip = *dst;
    p.dst_port = parse_number<std::uint16_t>(fields[5], 65535, line_no, "dst_port");
    packets.push_back(p);
  }
  if (!header_seen) row_error(1, "missing header");
  return packets;
}

void save_traffic(const std::vector<Packet>& packets, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write traffic '" + path.string() + "'");
  out << format_traffic_csv(packets);
  out.flush();
  if (!out) throw IoError("error writing traffic '" + path.string() + "'");
}

std::vector<Packet> load_traffic(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open traffic '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading traffic '" + path.string() + "'");
  return parse_traffic_csv(buf.str());
}

}  // namespace pfw
