// Acceptance gate: one PASS/FAIL/SKIP line per criterion.
//
//   acceptance            run every criterion; exit 1 if any fails
//   acceptance --only N   run criterion N; exit 77 if it was skipped

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pfw/bench.hpp"
#include "pfw/classifier.hpp"
#include "pfw/cli.hpp"
#include "pfw/engines.hpp"
#include "pfw/rule_io.hpp"
#include "pfw/traffic.hpp"
#include "../support.hpp"

using namespace pfw;

namespace {

enum class Outcome { kPass, kFail, kSkip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

Verdict pass(std::string d) { return {Outcome::kPass, std::move(d)}; }
Verdict fail(std::string d) { return {Outcome::kFail, std::move(d)}; }

Ruleset gen_rules(std::size_t count, std::uint64_t seed) {
  RulesetGenParams params;
  params.count = count;
  params.seed = seed;
  return generate_ruleset(params);
}

std::vector<Packet> gen_uniform(std::size_t count, std::uint64_t seed) {
  TrafficProfile profile;
  profile.count = count;
  profile.seed = seed;
  return generate_traffic(profile);
}

EngineConfig engine_config(Model model, std::size_t nodes, std::size_t batch) {
  EngineConfig c;
  c.model = model;
  c.nodes = nodes;
  c.batch_size = batch;
  return c;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

constexpr std::size_t kNodeSet[] = {1, 2, 3, 4, 8, 64};

// 1. Every model x nodes (x scan kernel) equals the sequential oracle, exactly.
Verdict oracle_equivalence() {
  std::size_t runs = 0;
  std::string kernels;
  std::size_t packets_checked = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (std::size_t size : {16u, 256u, 2048u}) {
      const Ruleset rs = gen_rules(size, seed);
      const auto packets = gen_uniform(10000, seed + 1000);
      std::vector<MatchResult> oracle;
      oracle.reserve(packets.size());
      for (const Packet& p : packets) oracle.push_back(classify(rs, p));
      const RuleTable table(rs);
      for (KernelKind kind : available_kernels()) {
      override_kernel(kind);
      for (Model model : kAllModels) {
        for (std::size_t nodes : kNodeSet) {
          const auto out = Engine(engine_config(model, nodes, 1024)).run(table, packets);
          ++runs;
          for (std::size_t i = 0; i < packets.size(); ++i) {
            if (out.results[i].verdict != oracle[i].verdict ||
                out.results[i].matched_index != oracle[i].matched_index) {
              reset_kernel();
              return fail(fmt("seed %llu |R|=%zu kernel %s model %s nodes %zu packet %zu diverges",
                              static_cast<unsigned long long>(seed), size,
                              std::string(to_string(kind)).c_str(),
                              std::string(to_string(model)).c_str(), nodes, i));
            }
          }
          packets_checked += packets.size();
        }
      }
      }
    }
  }
  reset_kernel();
  for (KernelKind kind : available_kernels()) {
    kernels += (kernels.empty() ? "" : "+") + std::string(to_string(kind));
  }
  return pass(fmt("%zu engine runs, %zu packet verdicts identical (kernels %s)", runs,
                  packets_checked, kernels.c_str()));
}

// 2. Default deny on the empty ruleset; first-match confirmed by exhaustive rescan.
Verdict deny_and_first_match() {
  const auto traffic = gen_uniform(10000, 77);
  for (Model model : kAllModels) {
    const auto out = Engine(engine_config(model, 4, 512)).run(Ruleset{}, traffic);
    for (const auto& r : out.results) {
      if (r.verdict != Action::kDrop || r.matched_index) {
        return fail(std::string("empty ruleset did not drop under ") +
                    std::string(to_string(model)));
      }
    }
  }

  testing::RandomCases gen(2025);
  std::size_t cases = 0;
  std::size_t matched = 0;
  std::uint64_t pair_checks = 0;
  while (cases < 100000) {
    const Ruleset rs = gen.ruleset(1 + gen.below(96));
    const auto packets = gen.packets(500);
    const auto hybrid = Engine(engine_config(Model::kHybrid, 1 + gen.below(8), 64)).run(rs, packets);
    for (std::size_t i = 0; i < packets.size(); ++i, ++cases) {
      const MatchResult r = classify(rs, packets[i]);
      if (!(hybrid.results[i].matched_index == r.matched_index &&
            hybrid.results[i].verdict == r.verdict)) {
        return fail("hybrid engine disagrees with classify");
      }
      const std::size_t scan_to = r.matched_index ? *r.matched_index : rs.size();
      for (std::size_t k = 0; k < scan_to; ++k, ++pair_checks) {
        if (testing::oracle_match(rs.rules[k], packets[i])) {
          return fail(fmt("rule %zu matches before reported index", k));
        }
      }
      if (r.matched_index) {
        ++matched;
        if (!testing::oracle_match(rs.rules[*r.matched_index], packets[i]) ||
            r.verdict != rs.rules[*r.matched_index].action) {
          return fail("reported rule does not match or verdict differs");
        }
      } else if (r.verdict != Action::kDrop) {
        return fail("unmatched packet not dropped");
      }
    }
  }
  return pass(fmt("%zu packets (%zu matched), %llu lower-index rule rescans", cases, matched,
                  static_cast<unsigned long long>(pair_checks)));
}

// 3. Comparison accounting under worst-case traffic.
Verdict work_accounting() {
  const std::size_t rules = 2048;
  const std::size_t batch = 4096;
  const Ruleset rs = gen_rules(rules, 3);
  const auto packets = generate_traffic(worst_case_profile(batch, 3), rs);
  const RuleTable table(rs);

  const auto seq = classify_batch_sequential(table, packets);
  if (seq.stats.total_comparisons != batch * rules) {
    return fail(fmt("sequential total %llu != %zu",
                    static_cast<unsigned long long>(seq.stats.total_comparisons), batch * rules));
  }
  for (std::size_t w : kNodeSet) {
    const auto dp = Engine(engine_config(Model::kDataParallel, w, batch)).run(table, packets);
    if (dp.stats.total_comparisons != seq.stats.total_comparisons) {
      return fail(fmt("data-parallel W=%zu total differs", w));
    }
    const auto fp =
        Engine(engine_config(Model::kFunctionParallel, w, batch)).run(table, packets);
    const std::size_t ceil = (rules + w - 1) / w;
    if (fp.stats.max_worker_comparisons != ceil) {
      return fail(fmt("function-parallel W=%zu max per-worker %llu != %zu", w,
                      static_cast<unsigned long long>(fp.stats.max_worker_comparisons), ceil));
    }
  }
  return pass(fmt("sequential = %zu x %zu; data-parallel totals equal; function-parallel "
                  "per-worker max = ceil(|R|/W) for W in {1,2,3,4,8,64}",
                  batch, rules));
}

// 4. W=1 function-parallel == sequential, nodes=1 hybrid == data-parallel,
//    batch=1 hybrid == function-parallel; results and comparisons.
Verdict degeneracy() {
  const Ruleset rs = gen_rules(2048, 21);
  const auto packets = gen_uniform(4000, 22);
  const RuleTable table(rs);
  auto same = [](const BatchOutput& a, const BatchOutput& b) {
    return a.results == b.results && a.stats.total_comparisons == b.stats.total_comparisons &&
           a.stats.max_worker_comparisons == b.stats.max_worker_comparisons;
  };
  const auto seq = classify_batch_sequential(table, packets);
  if (!same(Engine(engine_config(Model::kFunctionParallel, 1, 1024)).run(table, packets), seq)) {
    return fail("W=1 function-parallel differs from sequential");
  }
  for (std::size_t w : {2u, 4u}) {
    if (!same(Engine(engine_config(Model::kHybrid, 1, 1024)).run(table, packets),
              Engine(engine_config(Model::kDataParallel, w, 1024)).run(table, packets))) {
      return fail(fmt("nodes=1 hybrid differs from data-parallel W=%zu", w));
    }
  }
  const std::span<const Packet> head(packets.data(), 500);
  for (std::size_t w : kNodeSet) {
    if (!same(Engine(engine_config(Model::kHybrid, w, 1)).run(table, head),
              Engine(engine_config(Model::kFunctionParallel, w, 1)).run(table, head))) {
      return fail(fmt("batch=1 hybrid differs from function-parallel at nodes=%zu", w));
    }
  }
  return pass("all three collapses exact (results, totals, per-worker maxima)");
}

std::size_t physical_cores() {
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::set<std::pair<std::string, std::string>> cores;
  std::string line, physical = "0";
  while (std::getline(cpuinfo, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    auto key = line.substr(0, line.find_last_not_of(" \t", colon - 1) + 1);
    const auto value = line.substr(colon + 1);
    if (key == "physical id") physical = value;
    if (key == "core id") cores.emplace(physical, value);
  }
  if (!cores.empty()) return cores.size();
  return std::thread::hardware_concurrency();
}

// 5. Direction-only throughput trend; needs >= 4 physical cores.
Verdict throughput_trend() {
  const std::size_t cores = physical_cores();
  const Ruleset rs = gen_rules(2048, 5);
  const auto packets = generate_traffic(worst_case_profile(16384, 5), rs);
  const auto seq = run_point(rs, packets, engine_config(Model::kSequential, 1, 16384), 5);
  const auto dp = run_point(rs, packets, engine_config(Model::kDataParallel, 4, 16384), 5);
  const double ratio = dp.throughput_pps / seq.throughput_pps;
  const std::string measured = fmt("data-parallel W=4 / sequential throughput = %.3f "
                                   "(%.0f vs %.0f pps, %zu physical cores)",
                                   ratio, dp.throughput_pps, seq.throughput_pps, cores);
  if (cores < 4) return {Outcome::kSkip, "host has fewer than 4 physical cores; " + measured};
  return ratio > 1.0 ? pass(measured) : fail(measured);
}

// 6. Byte-identical generator output; verify gate passes, and catches a
//    max-index aggregator.
Verdict determinism_and_verify() {
  const auto dir = std::filesystem::temp_directory_path() / "pfw_acceptance";
  std::filesystem::create_directories(dir);
  auto cli = [](std::vector<std::string> args) {
    args.insert(args.begin(), "pfw");
    std::ostringstream out, err;
    return cli::run(args, out, err);
  };
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string{std::istreambuf_iterator<char>(in), {}};
  };
  const auto r1 = (dir / "r1.txt").string(), r2 = (dir / "r2.txt").string();
  const auto t1 = (dir / "t1.csv").string(), t2 = (dir / "t2.csv").string();
  for (const auto& out : {r1, r2}) {
    if (cli({"gen-rules", "--count", "2048", "--seed", "7", "--out", out}) != 0) {
      return fail("gen-rules failed");
    }
  }
  for (const auto& out : {t1, t2}) {
    if (cli({"gen-traffic", "--count", "10000", "--seed", "7", "--out", out}) != 0) {
      return fail("gen-traffic failed");
    }
  }
  if (slurp(r1) != slurp(r2)) return fail("gen-rules output differs between runs");
  if (slurp(t1) != slurp(t2)) return fail("gen-traffic output differs between runs");

  const int ok = cli({"verify", "--rules", r1, "--traffic", t1});
  if (ok != 0) return fail(fmt("verify exited %d on the standard workload", ok));

  const AggregateFn take_max = [](std::span<const PartialMatch> partials,
                                  std::size_t) -> MatchResult {
    MatchResult r;
    for (const auto& pm : partials) {
      if (pm.local_match && (!r.matched_index || pm.local_match->global_index > *r.matched_index)) {
        r.matched_index = pm.local_match->global_index;
        r.verdict = pm.local_match->action;
      }
    }
    return r;
  };
  cli::VerifyOptions opts;
  opts.rules_path = r1;
  opts.traffic_path = t1;
  std::ostringstream out, err;
  const int mutated = cli::cmd_verify(opts, out, err, take_max);
  if (mutated != cli::kExitDivergence) return fail(fmt("mutated verify exited %d", mutated));
  std::string first = err.str();
  if (!first.empty() && first.back() == '\n') first.pop_back();
  return pass("identical files; verify exit 0; mutation exit 3 (" + first + ")");
}

// 7. Fig. 5 / Fig. 6 sweeps in comparison space, read back from the CSV.
Verdict sweeps_in_comparison_space() {
  const auto dir = std::filesystem::temp_directory_path() / "pfw_acceptance";
  std::filesystem::create_directories(dir);
  auto through_csv = [&](const std::vector<BenchReport>& reports, const char* name) {
    const auto path = dir / name;
    emit_csv(reports, path);
    std::ifstream in(path, std::ios::binary);
    return parse_bench_csv(std::string{std::istreambuf_iterator<char>(in), {}});
  };

  SweepSpec rules_axis;
  rules_axis.axis = SweepAxis::kRules;
  rules_axis.axis_values = {128, 256, 512, 1024, 2048};
  rules_axis.nodes = 64;
  rules_axis.packets = 1024;
  rules_axis.batch_size = 1024;
  rules_axis.repetitions = 1;
  rules_axis.match_mode = MatchMode::kWorstCase;
  const auto fig5 = through_csv(run_sweep(rules_axis), "fig5.csv");
  if (fig5.size() != 5 * 4) return fail("rules sweep row count");

  std::vector<std::pair<double, double>> seq_points;
  for (const auto& r : fig5) {
    if (r.model != Model::kSequential) continue;
    const double per_packet = static_cast<double>(r.total_comparisons) / rules_axis.packets;
    if (per_packet != static_cast<double>(r.ruleset_size)) {
      return fail(fmt("sequential comparisons/packet %.1f != |R| %zu", per_packet,
                      r.ruleset_size));
    }
    seq_points.emplace_back(static_cast<double>(r.ruleset_size), per_packet);
  }
  for (std::size_t i = 1; i < seq_points.size(); ++i) {
    const double slope = (seq_points[i].second - seq_points[i - 1].second) /
                         (seq_points[i].first - seq_points[i - 1].first);
    if (slope != 1.0) return fail(fmt("slope %.6f between sweep points", slope));
  }

  SweepSpec nodes_axis;
  nodes_axis.axis = SweepAxis::kNodes;
  nodes_axis.axis_values = {1, 2, 4, 8, 16, 32, 64};
  nodes_axis.rules = 2048;
  nodes_axis.packets = 512;
  nodes_axis.batch_size = 512;
  nodes_axis.repetitions = 1;
  nodes_axis.match_mode = MatchMode::kWorstCase;
  nodes_axis.models = {Model::kFunctionParallel};
  const auto fig6 = through_csv(run_sweep(nodes_axis), "fig6.csv");
  if (fig6.size() != 7) return fail("nodes sweep row count");
  std::string series;
  for (std::size_t i = 0; i < fig6.size(); ++i) {
    series += (i ? "," : "") + std::to_string(fig6[i].max_worker_comparisons);
    if (i == 0) continue;
    const double half = static_cast<double>(fig6[i - 1].max_worker_comparisons) / 2.0;
    const double got = static_cast<double>(fig6[i].max_worker_comparisons);
    if (std::abs(got - half) > 1.0) {
      return fail(fmt("max per-worker comparisons %.0f at nodes=%zu is not half of %.0f", got,
                      fig6[i].nodes, 2 * half));
    }
  }
  return pass("sequential slope 1 rule/rule over |R| 128..2048; function-parallel per-worker "
              "max at |R|=2048 over nodes 1..64: " + series);
}

struct Criterion {
  int id;
  const char* name;
  Verdict (*run)();
};

constexpr Criterion kCriteria[] = {
    {1, "oracle equivalence", oracle_equivalence},
    {2, "default deny and first match", deny_and_first_match},
    {3, "work accounting", work_accounting},
    {4, "degeneracy collapses", degeneracy},
    {5, "throughput trend", throughput_trend},
    {6, "determinism and verify gate", determinism_and_verify},
    {7, "sweeps in comparison space", sweeps_in_comparison_space},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc == 3 && std::strcmp(argv[1], "--only") == 0) only = std::atoi(argv[2]);

  int failures = 0;
  int skipped = 0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = v.outcome == Outcome::kPass ? "PASS" : v.outcome == Outcome::kFail ? "FAIL" : "SKIP";
    std::printf("[%s] %d %s (%.1fs): %s\n", tag, c.id, c.name, secs, v.detail.c_str());
    std::fflush(stdout);
    failures += v.outcome == Outcome::kFail;
    skipped += v.outcome == Outcome::kSkip;
  }
  if (failures > 0) return 1;
  if (only != 0 && skipped > 0) return 77;
  return 0;
}
