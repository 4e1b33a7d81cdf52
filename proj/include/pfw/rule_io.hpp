#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pfw/model.hpp"

namespace pfw {

// One rule per line:
//   <ACCEPT|DROP> <tcp|udp|icmp|any> <src> <sport> <dst> <dport>
// Addresses are `a.b.c.d/len` or `*`; ports are `lo-hi`, `n`, or `*`.
// Host bits of addresses are zeroed. Throws ParseError with the 1-based
// column of the offending token. A `#` starts a comment.
Rule parse_rule(std::string_view line);

// Wildcard fields are written as `*`; port ranges always as `lo-hi`.
std::string format_rule(const Rule& rule);

// Blank lines and comments are skipped. The first malformed line aborts the
// load with a ParseError carrying its line number.
Ruleset load_ruleset(const std::filesystem::path& path);
Ruleset parse_ruleset(std::string_view text);
void save_ruleset(const Ruleset& ruleset, const std::filesystem::path& path);

}  // namespace pfw
