#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfw/engines.hpp"
#include "pfw/model.hpp"
#include "pfw/traffic.hpp"

namespace pfw {

struct BenchReport {
  Model model = Model::kSequential;
  std::size_t nodes = 1;
  std::size_t ruleset_size = 0;
  std::size_t batch_size = 0;
  std::size_t repetitions = 0;
  std::size_t packets = 0;  // per pass; not part of the CSV
  double avg_packet_delay_ns = 0.0;
  double throughput_pps = 0.0;
  std::uint64_t total_comparisons = 0;
  std::uint64_t max_worker_comparisons = 0;

  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

// One untimed warm-up pass, then `repetitions` timed passes. Timing is the
// median pass; delay = wall / packets and throughput = packets / wall.
// Throws std::logic_error if comparison counters differ between passes.
BenchReport run_point(const Ruleset& ruleset, std::span<const Packet> packets,
                      const EngineConfig& config, std::size_t repetitions);

enum class SweepAxis { kRules, kNodes };

struct SweepSpec {
  SweepAxis axis = SweepAxis::kNodes;
  std::vector<std::size_t> axis_values;  // nonempty, strictly increasing
  std::size_t rules = 2048;              // fixed when axis == kNodes
  std::size_t nodes = 64;                // fixed when axis == kRules
  std::size_t packets = 4096;
  std::size_t batch_size = 4096;
  std::uint64_t seed = 1;
  std::size_t repetitions = 5;
  MatchMode match_mode = MatchMode::kWorstCase;
  std::vector<Model> models{std::begin(kAllModels), std::end(kAllModels)};
};

void validate(const SweepSpec& spec);

// Rows ordered by model (in spec order), then axis value. Each ruleset size
// gets one generated ruleset and one traffic batch, shared by all models.
std::vector<BenchReport> run_sweep(const SweepSpec& spec);

inline constexpr std::string_view kBenchCsvHeader =
    "model,nodes,rules,batch,reps,avg_delay_ns,throughput_pps,total_comparisons,"
    "max_worker_comparisons";

// Doubles use the shortest representation that round-trips exactly.
std::string format_bench_csv(std::span<const BenchReport> reports);
std::vector<BenchReport> parse_bench_csv(std::string_view text);
void emit_csv(std::span<const BenchReport> reports, const std::filesystem::path& path);

}  // namespace pfw
