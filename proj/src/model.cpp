#include "pfw/model.hpp"

#include <charconv>

namespace pfw {

std::string_view to_string(Action action) {
  return action == Action::kAccept ? "ACCEPT" : "DROP";
}

std::string_view to_string(Protocol proto) {
  switch (proto) {
    case Protocol::kTcp:
      return "tcp";
    case Protocol::kUdp:
      return "udp";
    case Protocol::kIcmp:
      return "icmp";
    case Protocol::kAny:
      break;
  }
  return "any";
}

std::string format_ipv4(Ipv4 addr) {
  std::string out;
  out.reserve(15);
  for (int shift = 24; shift >= 0; shift -= 8) {
    out += std::to_string((addr >> shift) & 0xffu);
    if (shift != 0) out += '.';
  }
  return out;
}

std::optional<Ipv4> parse_ipv4(std::string_view text) {
  Ipv4 addr = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
    if (p == end || *p < '0' || *p > '9') return std::nullopt;
    unsigned value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc{} || value > 255 || next - p > 3) return std::nullopt;
    addr = (addr << 8) | value;
    p = next;
  }
  if (p != end) return std::nullopt;
  return addr;
}

}  // namespace pfw
