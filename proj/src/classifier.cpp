#include "pfw/classifier.hpp"

#include <algorithm>
#include <chrono>

namespace pfw {

MatchResult classify(const Ruleset& ruleset, const Packet& packet) {
  for (std::size_t i = 0; i < ruleset.rules.size(); ++i) {
    if (rule_matches(ruleset.rules[i], packet)) {
      return {ruleset.rules[i].action, static_cast<std::uint32_t>(i), i + 1};
    }
  }
  return {kDefaultVerdict, std::nullopt, ruleset.rules.size()};
}

MatchResult to_match_result(const RuleTable& table, const ScanHit& hit) {
  if (!hit.matched()) return {kDefaultVerdict, std::nullopt, hit.comparisons};
  return {table.action(hit.index), hit.index, hit.comparisons};
}

BatchOutput classify_batch_sequential(const RuleTable& table, std::span<const Packet> packets) {
  const auto start = std::chrono::steady_clock::now();
  BatchOutput out;
  out.results.reserve(packets.size());
  for (const Packet& p : packets) {
    const ScanHit hit = scan(table, 0, table.size(), PacketKey::from(p));
    out.results.push_back(to_match_result(table, hit));
    out.stats.total_comparisons += hit.comparisons;
    out.stats.max_worker_comparisons =
        std::max<std::uint64_t>(out.stats.max_worker_comparisons, hit.comparisons);
  }
  out.stats.packets_processed = packets.size();
  out.stats.wall_time_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                           start)
          .count());
  return out;
}

BatchOutput classify_batch_sequential(const Ruleset& ruleset, std::span<const Packet> packets) {
  return classify_batch_sequential(RuleTable(ruleset), packets);
}

}  // namespace pfw
