#include "pfw/bench.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <stdexcept>

#include "pfw/errors.hpp"

namespace pfw {

BenchReport run_point(const Ruleset& ruleset, std::span<const Packet> packets,
                      const EngineConfig& config, std::size_t repetitions) {
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  Engine engine(config);
  const RuleTable table(ruleset);
  const BatchOutput warmup = engine.run(table, packets);

  std::vector<std::uint64_t> wall;
  wall.reserve(repetitions);
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    const BatchOutput pass = engine.run(table, packets);
    if (pass.stats.total_comparisons != warmup.stats.total_comparisons ||
        pass.stats.max_worker_comparisons != warmup.stats.max_worker_comparisons) {
      throw std::logic_error("comparison counters changed between repetitions");
    }
    wall.push_back(pass.stats.wall_time_ns);
  }
  std::sort(wall.begin(), wall.end());
  const double median = wall.size() % 2 == 1
                            ? static_cast<double>(wall[wall.size() / 2])
                            : 0.5 * (static_cast<double>(wall[wall.size() / 2 - 1]) +
                                     static_cast<double>(wall[wall.size() / 2]));

  BenchReport report;
  report.model = config.model;
  report.nodes = config.nodes;
  report.ruleset_size = ruleset.size();
  report.batch_size = config.batch_size;
  report.repetitions = repetitions;
  report.packets = packets.size();
  report.total_comparisons = warmup.stats.total_comparisons;
  report.max_worker_comparisons = warmup.stats.max_worker_comparisons;
  if (!packets.empty() && median > 0.0) {
    report.avg_packet_delay_ns = median / static_cast<double>(packets.size());
    report.throughput_pps = static_cast<double>(packets.size()) / (median * 1e-9);
  }
  return report;
}

void validate(const SweepSpec& spec) {
  if (spec.axis_values.empty()) throw ConfigError("sweep needs at least one axis value");
  if (!std::is_sorted(spec.axis_values.begin(), spec.axis_values.end()) ||
      std::adjacent_find(spec.axis_values.begin(), spec.axis_values.end()) !=
          spec.axis_values.end()) {
    throw ConfigError("sweep axis values must be strictly increasing");
  }
  if (spec.models.empty()) throw ConfigError("sweep needs at least one model");
  if (spec.repetitions < 1) throw ConfigError("repetitions must be at least 1");
  const std::size_t max_nodes =
      spec.axis == SweepAxis::kNodes ? spec.axis_values.back() : spec.nodes;
  const std::size_t min_nodes =
      spec.axis == SweepAxis::kNodes ? spec.axis_values.front() : spec.nodes;
  validate(EngineConfig{Model::kSequential, min_nodes, spec.batch_size});
  validate(EngineConfig{Model::kSequential, max_nodes, spec.batch_size});
}

std::vector<BenchReport> run_sweep(const SweepSpec& spec) {
  validate(spec);

  struct Workload {
    Ruleset ruleset;
    std::vector<Packet> packets;
  };
  std::map<std::size_t, Workload> workloads;
  auto workload = [&](std::size_t rules) -> const Workload& {
    auto it = workloads.find(rules);
    if (it != workloads.end()) return it->second;
    RulesetGenParams params;
    params.count = rules;
    params.seed = spec.seed;
    Workload w;
    w.ruleset = generate_ruleset(params);
    TrafficProfile profile = spec.match_mode == MatchMode::kWorstCase
                                 ? worst_case_profile(spec.packets, spec.seed)
                                 : TrafficProfile{};
    profile.count = spec.packets;
    profile.seed = spec.seed;
    w.packets = generate_traffic(profile, w.ruleset);
    return workloads.emplace(rules, std::move(w)).first->second;
  };

  std::vector<BenchReport> reports;
  for (Model model : spec.models) {
    for (std::size_t value : spec.axis_values) {
      const std::size_t rules = spec.axis == SweepAxis::kRules ? value : spec.rules;
      const std::size_t nodes = spec.axis == SweepAxis::kNodes ? value : spec.nodes;
      const Workload& w = workload(rules);
      EngineConfig config;
      config.model = model;
      config.nodes = nodes;
      config.batch_size = spec.batch_size;
      reports.push_back(run_point(w.ruleset, w.packets, config, spec.repetitions));
    }
  }
  return reports;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename T>
T parse_field(std::string_view s, std::size_t line) {
  T value{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    throw ParseError("bench csv line " + std::to_string(line) + ": bad field '" +
                         std::string(s) + "'",
                     line);
  }
  return value;
}

}  // namespace

std::string format_bench_csv(std::span<const BenchReport> reports) {
  std::string out(kBenchCsvHeader);
  out += '\n';
  for (const BenchReport& r : reports) {
    out += to_string(r.model);
    out += ',' + std::to_string(r.nodes);
    out += ',' + std::to_string(r.ruleset_size);
    out += ',' + std::to_string(r.batch_size);
    out += ',' + std::to_string(r.repetitions);
    out += ',' + format_double(r.avg_packet_delay_ns);
    out += ',' + format_double(r.throughput_pps);
    out += ',' + std::to_string(r.total_comparisons);
    out += ',' + std::to_string(r.max_worker_comparisons);
    out += '\n';
  }
  return out;
}

std::vector<BenchReport> parse_bench_csv(std::string_view text) {
  std::vector<BenchReport> reports;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line_no == 1) {
      if (line != kBenchCsvHeader) throw ParseError("bench csv: unexpected header", 1);
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    for (std::size_t pos = 0;;) {
      const auto comma = line.find(',', pos);
      f.push_back(line.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (f.size() != 9) throw ParseError("bench csv: expected 9 fields", line_no);
    BenchReport r;
    const auto model = parse_model(f[0]);
    if (!model) throw ParseError("bench csv: unknown model", line_no);
    r.model = *model;
    r.nodes = parse_field<std::size_t>(f[1], line_no);
    r.ruleset_size = parse_field<std::size_t>(f[2], line_no);
    r.batch_size = parse_field<std::size_t>(f[3], line_no);
    r.repetitions = parse_field<std::size_t>(f[4], line_no);
    r.avg_packet_delay_ns = parse_field<double>(f[5], line_no);
    r.throughput_pps = parse_field<double>(f[6], line_no);
    r.total_comparisons = parse_field<std::uint64_t>(f[7], line_no);
    r.max_worker_comparisons = parse_field<std::uint64_t>(f[8], line_no);
    reports.push_back(r);
  }
  return reports;
}

void emit_csv(std::span<const BenchReport> reports, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write results '" + path.string() + "'");
  out << format_bench_csv(reports);
  out.flush();
  if (!out) throw IoError("error writing results '" + path.string() + "'");
}

}  // namespace pfw
