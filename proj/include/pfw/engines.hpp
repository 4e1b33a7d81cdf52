#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pfw/classifier.hpp"
#include "pfw/kernels.hpp"
#include "pfw/model.hpp"
#include "pfw/worker_pool.hpp"

namespace pfw {

enum class Model { kSequential, kDataParallel, kFunctionParallel, kHybrid };

// CLI spellings: sequential, data, function, hybrid.
std::string_view to_string(Model model);
std::optional<Model> parse_model(std::string_view text);
inline constexpr Model kAllModels[] = {Model::kSequential, Model::kDataParallel,
                                       Model::kFunctionParallel, Model::kHybrid};

// Upper bound on nodes, after the per-block thread limit of the GPU design.
inline constexpr std::size_t kMaxNodes = 512;

// A contiguous slice [global_offset, global_offset + size) of the ruleset.
struct RulePartition {
  std::size_t part_index = 0;
  std::size_t global_offset = 0;
  std::span<const Rule> rules;

  std::size_t size() const { return rules.size(); }
  std::size_t end() const { return global_offset + rules.size(); }
};

struct PartitionBounds {
  std::size_t offset;
  std::size_t size;
};

// Balanced contiguous split: the first (count % parts) slices get one extra.
// parts > count yields empty trailing slices positioned at `count`.
std::vector<PartitionBounds> partition_bounds(std::size_t count, std::size_t parts);
std::vector<RulePartition> partition_rules(const Ruleset& ruleset, std::size_t parts);

struct LocalMatch {
  std::uint32_t global_index;
  Action action;
};

// One firewall node's answer for one packet.
struct PartialMatch {
  std::size_t part_index = 0;
  std::optional<LocalMatch> local_match;  // earliest match inside the partition
  std::uint64_t comparisons = 0;          // rules this node examined
};

// Coordinator-side merge: the minimum global index wins, otherwise default
// deny. Comparisons are summed. Throws std::logic_error on a duplicate
// part_index or an index outside the ruleset.
MatchResult aggregate(std::span<const PartialMatch> partials, std::size_t rule_count);

using AggregateFn = MatchResult (*)(std::span<const PartialMatch>, std::size_t);

struct EngineConfig {
  Model model = Model::kSequential;
  // Data/function-parallel: firewall nodes. Hybrid: rule-scanning lanes per packet.
  std::size_t nodes = 1;
  // Packets per dispatch; each dispatch ends in a barrier.
  std::size_t batch_size = 1024;
  // Pool threads; 0 picks `nodes` (data/function) or the hardware concurrency (hybrid).
  std::size_t pool_threads = 0;
  // Merge step for partitioned models. Swappable so verification can be
  // exercised against a broken coordinator.
  AggregateFn aggregator = &aggregate;
};

// Throws ConfigError if nodes is outside [1, kMaxNodes] or batch_size is 0.
void validate(const EngineConfig& config);

// Runs batches under one execution model. Reusable across calls, but not
// safe to call concurrently with itself.
class Engine {
 public:
  explicit Engine(EngineConfig config);

  const EngineConfig& config() const { return config_; }
  std::size_t pool_size() const { return pool_ ? pool_->size() : 0; }

  BatchOutput run(const RuleTable& table, std::span<const Packet> packets);
  BatchOutput run(const Ruleset& ruleset, std::span<const Packet> packets);

 private:
  void data_parallel_batch(const RuleTable& table, std::span<const Packet> batch,
                           std::span<MatchResult> out, ClassifyStats& stats);
  void partitioned_batch(const RuleTable& table, std::span<const Packet> batch,
                         std::span<MatchResult> out, ClassifyStats& stats);

  EngineConfig config_;
  std::unique_ptr<WorkerPool> pool_;
  std::vector<PartialMatch> partials_;
  std::vector<std::uint64_t> node_totals_;
  std::vector<std::uint64_t> node_max_;
};

BatchOutput run_data_parallel(const Ruleset& ruleset, std::span<const Packet> packets,
                              const EngineConfig& config);
BatchOutput run_function_parallel(const Ruleset& ruleset, std::span<const Packet> packets,
                                  const EngineConfig& config);
BatchOutput run_hybrid(const Ruleset& ruleset, std::span<const Packet> packets,
                       const EngineConfig& config);
BatchOutput run(const Ruleset& ruleset, std::span<const Packet> packets, const EngineConfig& config);

}  // namespace pfw
