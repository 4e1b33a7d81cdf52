#include "pfw/engines.hpp"

#include <algorithm>
#include <bitset>
#include <chrono>
#include <stdexcept>
#include <string>
#include <thread>

#include "pfw/errors.hpp"

namespace pfw {

std::string_view to_string(Model model) {
  switch (model) {
    case Model::kSequential:
      return "sequential";
    case Model::kDataParallel:
      return "data";
    case Model::kFunctionParallel:
      return "function";
    case Model::kHybrid:
      return "hybrid";
  }
  return "unknown";
}

std::optional<Model> parse_model(std::string_view text) {
  for (Model m : kAllModels) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

std::vector<PartitionBounds> partition_bounds(std::size_t count, std::size_t parts) {
  std::vector<PartitionBounds> bounds;
  if (parts == 0) return bounds;
  bounds.reserve(parts);
  const std::size_t base = count / parts;
  const std::size_t extra = count % parts;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    const std::size_t size = base + (i < extra ? 1 : 0);
    bounds.push_back({offset, size});
    offset += size;
  }
  return bounds;
}

std::vector<RulePartition> partition_rules(const Ruleset& ruleset, std::size_t parts) {
  if (parts == 0) throw ConfigError("partition count must be at least 1");
  std::vector<RulePartition> out;
  const std::span<const Rule> all(ruleset.rules);
  std::size_t index = 0;
  for (const auto& b : partition_bounds(ruleset.size(), parts)) {
    out.push_back({index++, b.offset, all.subspan(b.offset, b.size)});
  }
  return out;
}

MatchResult aggregate(std::span<const PartialMatch> partials, std::size_t rule_count) {
  std::bitset<kMaxNodes> seen;
  MatchResult result;
  for (const PartialMatch& pm : partials) {
    if (pm.part_index >= kMaxNodes || seen.test(pm.part_index)) {
      throw std::logic_error("aggregate: duplicate or out-of-range part_index " +
                             std::to_string(pm.part_index));
    }
    seen.set(pm.part_index);
    result.comparisons += pm.comparisons;
    if (!pm.local_match) continue;
    const LocalMatch& m = *pm.local_match;
    if (m.global_index >= rule_count) {
      throw std::logic_error("aggregate: rule index " + std::to_string(m.global_index) +
                             " outside ruleset of " + std::to_string(rule_count));
    }
    if (!result.matched_index || m.global_index < *result.matched_index) {
      result.matched_index = m.global_index;
      result.verdict = m.action;
    }
  }
  return result;
}

void validate(const EngineConfig& config) {
  if (config.nodes < 1 || config.nodes > kMaxNodes) {
    throw ConfigError("nodes must be in [1, " + std::to_string(kMaxNodes) + "], got " +
                      std::to_string(config.nodes));
  }
  if (config.batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (config.aggregator == nullptr) throw ConfigError("aggregator must not be null");
}

namespace {

std::size_t default_pool_threads(const EngineConfig& config) {
  if (config.pool_threads != 0) return config.pool_threads;
  if (config.model == Model::kHybrid) {
    return std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, kMaxNodes);
  }
  return config.nodes;
}

}  // namespace

Engine::Engine(EngineConfig config) : config_(config) {
  validate(config_);
  if (config_.model != Model::kSequential) {
    pool_ = std::make_unique<WorkerPool>(default_pool_threads(config_));
  }
}

BatchOutput Engine::run(const Ruleset& ruleset, std::span<const Packet> packets) {
  return run(RuleTable(ruleset), packets);
}

BatchOutput Engine::run(const RuleTable& table, std::span<const Packet> packets) {
  if (config_.model == Model::kSequential) return classify_batch_sequential(table, packets);

  const auto start = std::chrono::steady_clock::now();
  BatchOutput out;
  out.results.resize(packets.size());
  for (std::size_t first = 0; first < packets.size(); first += config_.batch_size) {
    const std::size_t n = std::min(config_.batch_size, packets.size() - first);
    const auto batch = packets.subspan(first, n);
    const auto results = std::span<MatchResult>(out.results).subspan(first, n);
    if (config_.model == Model::kDataParallel) {
      data_parallel_batch(table, batch, results, out.stats);
    } else {
      partitioned_batch(table, batch, results, out.stats);
    }
  }
  out.stats.packets_processed = packets.size();
  out.stats.wall_time_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                           start)
          .count());
  return out;
}

// Each node owns a contiguous chunk of the batch and the whole ruleset.
void Engine::data_parallel_batch(const RuleTable& table, std::span<const Packet> batch,
                                 std::span<MatchResult> out, ClassifyStats& stats) {
  const std::size_t nodes = config_.nodes;
  const auto chunks = partition_bounds(batch.size(), nodes);
  node_totals_.assign(nodes, 0);
  node_max_.assign(nodes, 0);
  pool_->run(nodes, [&](std::size_t node) {
    const auto [offset, size] = chunks[node];
    std::uint64_t total = 0;
    std::uint64_t most = 0;
    for (std::size_t i = offset; i < offset + size; ++i) {
      const ScanHit hit = scan(table, 0, table.size(), PacketKey::from(batch[i]));
      out[i] = to_match_result(table, hit);
      total += hit.comparisons;
      most = std::max<std::uint64_t>(most, hit.comparisons);
    }
    node_totals_[node] = total;
    node_max_[node] = most;
  });
  for (std::size_t n = 0; n < nodes; ++n) {
    stats.total_comparisons += node_totals_[n];
    stats.max_worker_comparisons = std::max(stats.max_worker_comparisons, node_max_[n]);
  }
}

// Function-parallel and hybrid: every packet meets every rule partition and
// leaves one PartialMatch per (packet, partition) slot. Only the
// coordinator, after the barrier, turns partials into verdicts.
void Engine::partitioned_batch(const RuleTable& table, std::span<const Packet> batch,
                               std::span<MatchResult> out, ClassifyStats& stats) {
  const std::size_t nodes = config_.nodes;
  const auto parts = partition_bounds(table.size(), nodes);
  partials_.assign(batch.size() * nodes, PartialMatch{});

  auto scan_slot = [&](std::size_t packet, std::size_t part) {
    const auto [offset, size] = parts[part];
    const ScanHit hit = scan(table, offset, offset + size, PacketKey::from(batch[packet]));
    PartialMatch& slot = partials_[packet * nodes + part];
    slot.part_index = part;
    slot.comparisons = hit.comparisons;
    if (hit.matched()) slot.local_match = LocalMatch{hit.index, table.action(hit.index)};
  };

  if (config_.model == Model::kFunctionParallel) {
    // Traffic duplicated to every node; node t walks the batch over its slice.
    pool_->run(nodes, [&](std::size_t part) {
      for (std::size_t p = 0; p < batch.size(); ++p) scan_slot(p, part);
    });
  } else {
    // One block per packet, one lane per partition; all subtasks independent.
    pool_->run(batch.size() * nodes, [&](std::size_t task) {
      scan_slot(task / nodes, task % nodes);
    });
  }

  const std::span<const PartialMatch> all(partials_);
  for (std::size_t p = 0; p < batch.size(); ++p) {
    const auto slots = all.subspan(p * nodes, nodes);
    out[p] = config_.aggregator(slots, table.size());
    stats.total_comparisons += out[p].comparisons;
    for (const PartialMatch& pm : slots) {
      stats.max_worker_comparisons = std::max(stats.max_worker_comparisons, pm.comparisons);
    }
  }
}

namespace {

BatchOutput run_as(Model expected, const Ruleset& ruleset, std::span<const Packet> packets,
                   const EngineConfig& config) {
  if (config.model != expected) {
    throw ConfigError("config model '" + std::string(to_string(config.model)) +
                      "' does not match runner '" + std::string(to_string(expected)) + "'");
  }
  return Engine(config).run(ruleset, packets);
}

}  // namespace

BatchOutput run_data_parallel(const Ruleset& ruleset, std::span<const Packet> packets,
                              const EngineConfig& config) {
  return run_as(Model::kDataParallel, ruleset, packets, config);
}

BatchOutput run_function_parallel(const Ruleset& ruleset, std::span<const Packet> packets,
                                  const EngineConfig& config) {
  return run_as(Model::kFunctionParallel, ruleset, packets, config);
}

BatchOutput run_hybrid(const Ruleset& ruleset, std::span<const Packet> packets,
                       const EngineConfig& config) {
  return run_as(Model::kHybrid, ruleset, packets, config);
}

BatchOutput run(const Ruleset& ruleset, std::span<const Packet> packets,
                const EngineConfig& config) {
  return Engine(config).run(ruleset, packets);
}

}  // namespace pfw
