#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pfw/kernels.hpp"
#include "pfw/model.hpp"

namespace pfw {

struct ClassifyStats {
  std::uint64_t total_comparisons = 0;
  std::uint64_t packets_processed = 0;
  std::uint64_t wall_time_ns = 0;
  // Most rules any single worker examined for any single packet.
  std::uint64_t max_worker_comparisons = 0;
};

struct BatchOutput {
  std::vector<MatchResult> results;
  ClassifyStats stats;
};

// First-match, default-deny reference: a plain loop over rule_matches.
MatchResult classify(const Ruleset& ruleset, const Packet& packet);

MatchResult to_match_result(const RuleTable& table, const ScanHit& hit);

// Packets in order, one after the other, through the active scan kernel.
BatchOutput classify_batch_sequential(const RuleTable& table, std::span<const Packet> packets);
BatchOutput classify_batch_sequential(const Ruleset& ruleset, std::span<const Packet> packets);

}  // namespace pfw
