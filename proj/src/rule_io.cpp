#include "pfw/rule_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "pfw/errors.hpp"

namespace pfw {
namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
           line[i] != '#') {
      ++i;
    }
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

[[noreturn]] void fail(const std::string& msg, const Token& tok) {
  throw ParseError(msg + " at column " + std::to_string(tok.column) + ": '" +
                       std::string(tok.text) + "'",
                   0, tok.column);
}

Action parse_action(const Token& tok) {
  if (tok.text == "ACCEPT") return Action::kAccept;
  if (tok.text == "DROP") return Action::kDrop;
  fail("unknown action", tok);
}

Protocol parse_protocol(const Token& tok) {
  if (tok.text == "tcp") return Protocol::kTcp;
  if (tok.text == "udp") return Protocol::kUdp;
  if (tok.text == "icmp") return Protocol::kIcmp;
  if (tok.text == "any") return Protocol::kAny;
  fail("unknown protocol", tok);
}

CidrMatcher parse_cidr(const Token& tok) {
  if (tok.text == "*") return CidrMatcher::any();
  const auto slash = tok.text.find('/');
  if (slash == std::string_view::npos) fail("expected a.b.c.d/len or '*'", tok);
  const auto addr = parse_ipv4(tok.text.substr(0, slash));
  if (!addr) fail("invalid IPv4 address", tok);
  const auto len_text = tok.text.substr(slash + 1);
  unsigned len = 0;
  auto [end, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), len);
  if (len_text.empty() || ec != std::errc{} || end != len_text.data() + len_text.size()) {
    fail("invalid prefix length", tok);
  }
  if (len > 32) fail("prefix length exceeds 32", tok);
  return CidrMatcher::normalized(*addr, len);
}

std::uint16_t parse_port(std::string_view text, const Token& tok) {
  unsigned long value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || end != text.data() + text.size()) fail("invalid port", tok);
  if (ec == std::errc::result_out_of_range || value > 65535) fail("port out of range", tok);
  if (ec != std::errc{}) fail("invalid port", tok);
  return static_cast<std::uint16_t>(value);
}

PortRange parse_ports(const Token& tok) {
  if (tok.text == "*") return PortRange::any();
  const auto dash = tok.text.find('-');
  if (dash == std::string_view::npos) return PortRange::single(parse_port(tok.text, tok));
  const auto lo = parse_port(tok.text.substr(0, dash), tok);
  const auto hi = parse_port(tok.text.substr(dash + 1), tok);
  if (lo > hi) fail("inverted port range", tok);
  return {lo, hi};
}

std::string format_cidr(const CidrMatcher& cidr) {
  if (cidr.is_wildcard()) return "*";
  return format_ipv4(cidr.base) + "/" + std::to_string(cidr.prefix_len);
}

std::string format_ports(const PortRange& ports) {
  if (ports.is_wildcard()) return "*";
  return std::to_string(ports.lo) + "-" + std::to_string(ports.hi);
}

}  // namespace

Rule parse_rule(std::string_view line) {
  const auto tokens = tokenize(line);
  if (tokens.size() != 6) {
    const std::size_t column = tokens.size() > 6 ? tokens[6].column : line.size() + 1;
    throw ParseError("expected 6 fields, found " + std::to_string(tokens.size()) +
                         " (column " + std::to_string(column) + ")",
                     0, column);
  }
  Rule rule;
  rule.action = parse_action(tokens[0]);
  rule.proto = parse_protocol(tokens[1]);
  rule.src = parse_cidr(tokens[2]);
  rule.sport = parse_ports(tokens[3]);
  rule.dst = parse_cidr(tokens[4]);
  rule.dport = parse_ports(tokens[5]);
  return rule;
}

std::string format_rule(const Rule& rule) {
  std::string out{to_string(rule.action)};
  out += ' ';
  out += to_string(rule.proto);
  out += ' ';
  out += format_cidr(rule.src);
  out += ' ';
  out += format_ports(rule.sport);
  out += ' ';
  out += format_cidr(rule.dst);
  out += ' ';
  out += format_ports(rule.dport);
  return out;
}

Ruleset parse_ruleset(std::string_view text) {
  Ruleset ruleset;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (tokenize(line).empty()) continue;
    try {
      ruleset.rules.push_back(parse_rule(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no,
                       e.column());
    }
  }
  return ruleset;
}

Ruleset load_ruleset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open ruleset '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading ruleset '" + path.string() + "'");
  return parse_ruleset(buf.str());
}

void save_ruleset(const Ruleset& ruleset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write ruleset '" + path.string() + "'");
  for (const auto& rule : ruleset.rules) out << format_rule(rule) << '\n';
  out.flush();
  if (!out) throw IoError("error writing ruleset '" + path.string() + "'");
}

}  // namespace pfw
