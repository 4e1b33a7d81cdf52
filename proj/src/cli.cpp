#include "pfw/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pfw/bench.hpp"
#include "pfw/classifier.hpp"
#include "pfw/errors.hpp"
#include "pfw/rule_io.hpp"
#include "pfw/traffic.hpp"

namespace pfw::cli {
namespace {

std::string describe(const MatchResult& r) {
  std::string s(to_string(r.verdict));
  s += ',';
  s += r.matched_index ? std::to_string(*r.matched_index) : "-";
  return s;
}

Model model_from_flag(const std::string& text) {
  const auto model = parse_model(text);
  if (!model) {
    throw ConfigError("unknown model '" + text + "' (expected sequential|data|function|hybrid)");
  }
  return *model;
}

void check_nodes(std::size_t nodes) {
  if (nodes < 1 || nodes > kMaxNodes) {
    throw ConfigError("--nodes must be between 1 and " + std::to_string(kMaxNodes) +
                      " (the per-block thread bound), got " + std::to_string(nodes));
  }
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << text;
  f.flush();
  if (!f) throw IoError("error writing '" + path + "'");
}

}  // namespace

int cmd_classify(const ClassifyOptions& opts, std::ostream& out, std::ostream& /*err*/) {
  EngineConfig config;
  config.model = opts.model;
  config.nodes = opts.nodes;
  config.batch_size = opts.batch;
  validate(config);

  const Ruleset ruleset = load_ruleset(opts.rules_path);
  const std::vector<Packet> packets = load_traffic(opts.traffic_path);
  const BatchOutput output = Engine(config).run(ruleset, packets);

  std::string text;
  for (std::size_t i = 0; i < packets.size(); ++i) {
    text += std::to_string(packets[i].id);
    text += ',';
    text += describe(output.results[i]);
    text += '\n';
  }
  out << text;
  return kExitOk;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err,
               AggregateFn aggregator) {
  if (opts.nodes.empty()) throw ConfigError("verify needs at least one node count");
  for (std::size_t n : opts.nodes) check_nodes(n);
  if (opts.batch < 1) throw ConfigError("--batch must be at least 1");

  const Ruleset ruleset = load_ruleset(opts.rules_path);
  const std::vector<Packet> packets = load_traffic(opts.traffic_path);

  std::vector<MatchResult> expected;
  expected.reserve(packets.size());
  for (const Packet& p : packets) expected.push_back(classify(ruleset, p));

  const RuleTable table(ruleset);
  std::size_t runs = 0;
  for (Model model : kAllModels) {
    for (std::size_t nodes : opts.nodes) {
      if (model == Model::kSequential && runs > 0) break;  // nodes do not apply
      EngineConfig config;
      config.model = model;
      config.nodes = nodes;
      config.batch_size = opts.batch;
      config.aggregator = aggregator;
      const BatchOutput got = Engine(config).run(table, packets);
      ++runs;
      for (std::size_t i = 0; i < packets.size(); ++i) {
        const MatchResult& want = expected[i];
        const MatchResult& have = got.results[i];
        if (want.verdict != have.verdict || want.matched_index != have.matched_index) {
          err << "divergence: packet " << packets[i].id << " model " << to_string(model)
              << " nodes " << nodes << ": expected " << describe(want) << " actual "
              << describe(have) << '\n';
          return kExitDivergence;
        }
      }
    }
  }
  out << "verify: ok (" << packets.size() << " packets, " << ruleset.size() << " rules, "
      << runs << " engine runs, kernel " << to_string(active_kernel()) << ")\n";
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel packet-filter engine: classify, verify, benchmark, generate"};
  app.require_subcommand(1);

  ClassifyOptions classify_opts;
  std::string classify_model = "sequential";
  auto* classify_cmd = app.add_subcommand("classify", "Print a verdict line per packet");
  classify_cmd->add_option("--rules", classify_opts.rules_path, "Ruleset file")->required();
  classify_cmd->add_option("--traffic", classify_opts.traffic_path, "Traffic CSV")->required();
  classify_cmd->add_option("--model", classify_model, "sequential|data|function|hybrid");
  classify_cmd->add_option("--nodes", classify_opts.nodes, "Firewall nodes / lanes");
  classify_cmd->add_option("--batch", classify_opts.batch, "Packets per dispatch");

  VerifyOptions verify_opts;
  auto* verify_cmd =
      app.add_subcommand("verify", "Check every model against the sequential classifier");
  verify_cmd->add_option("--rules", verify_opts.rules_path, "Ruleset file")->required();
  verify_cmd->add_option("--traffic", verify_opts.traffic_path, "Traffic CSV")->required();
  verify_cmd->add_option("--values", verify_opts.nodes, "Node counts to check")
      ->delimiter(',');
  verify_cmd->add_option("--batch", verify_opts.batch, "Packets per dispatch");

  std::string bench_axis;
  std::vector<std::size_t> bench_values;
  std::string bench_model;
  std::string bench_out;
  bool bench_worst = false;
  SweepSpec sweep;
  sweep.batch_size = 0;  // 0: one dispatch for the whole packet set
  auto* bench_cmd = app.add_subcommand("bench", "Sweep ruleset size or node count, emit CSV");
  bench_cmd->add_option("--axis", bench_axis, "rules|nodes")->required();
  bench_cmd->add_option("--values", bench_values, "Axis values")->delimiter(',')->required();
  bench_cmd->add_option("--rules", sweep.rules, "Ruleset size when sweeping nodes");
  bench_cmd->add_option("--nodes", sweep.nodes, "Node count when sweeping rules");
  bench_cmd->add_option("--count", sweep.packets, "Packets per pass");
  bench_cmd->add_option("--batch", sweep.batch_size, "Packets per dispatch");
  bench_cmd->add_option("--seed", sweep.seed, "Generator seed");
  bench_cmd->add_option("--reps", sweep.repetitions, "Timed repetitions");
  bench_cmd->add_option("--model", bench_model, "Single model (default: all four)");
  bench_cmd->add_option("--out", bench_out, "Results CSV (default: stdout)");
  bench_cmd->add_flag("--worst-case", bench_worst, "Traffic matching no rule");

  RulesetGenParams rule_params;
  std::string rules_out;
  auto* gen_rules_cmd = app.add_subcommand("gen-rules", "Write a random ruleset");
  gen_rules_cmd->add_option("--count", rule_params.count, "Number of rules")->required();
  gen_rules_cmd->add_option("--seed", rule_params.seed, "Generator seed");
  gen_rules_cmd->add_option("--out", rules_out, "Ruleset file (default: stdout)");

  TrafficProfile profile;
  std::string traffic_out;
  std::string traffic_rules;
  bool traffic_worst = false;
  auto* gen_traffic_cmd = app.add_subcommand("gen-traffic", "Write homogeneous traffic CSV");
  gen_traffic_cmd->add_option("--count", profile.count, "Number of packets")->required();
  gen_traffic_cmd->add_option("--seed", profile.seed, "Generator seed");
  gen_traffic_cmd->add_option("--out", traffic_out, "Traffic CSV (default: stdout)");
  gen_traffic_cmd->add_option("--rules", traffic_rules, "Companion ruleset for --worst-case");
  gen_traffic_cmd->add_flag("--worst-case", traffic_worst, "Packets matching no rule");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*classify_cmd) {
      classify_opts.model = model_from_flag(classify_model);
      check_nodes(classify_opts.nodes);
      return cmd_classify(classify_opts, out, err);
    }
    if (*verify_cmd) return cmd_verify(verify_opts, out, err);
    if (*bench_cmd) {
      if (bench_axis == "rules") {
        sweep.axis = SweepAxis::kRules;
      } else if (bench_axis == "nodes") {
        sweep.axis = SweepAxis::kNodes;
      } else {
        throw ConfigError("--axis must be 'rules' or 'nodes'");
      }
      sweep.axis_values = bench_values;
      if (!bench_model.empty()) sweep.models = {model_from_flag(bench_model)};
      if (sweep.batch_size == 0) sweep.batch_size = std::max<std::size_t>(sweep.packets, 1);
      sweep.match_mode = bench_worst ? MatchMode::kWorstCase : MatchMode::kUniform;
      if (sweep.axis == SweepAxis::kNodes) {
        for (std::size_t n : sweep.axis_values) check_nodes(n);
      } else {
        check_nodes(sweep.nodes);
      }
      validate(sweep);
      const auto reports = run_sweep(sweep);
      write_text(format_bench_csv(reports), bench_out, out);
      return kExitOk;
    }
    if (*gen_rules_cmd) {
      const Ruleset ruleset = generate_ruleset(rule_params);
      std::string text;
      for (const Rule& r : ruleset.rules) text += format_rule(r) + '\n';
      write_text(text, rules_out, out);
      return kExitOk;
    }
    if (*gen_traffic_cmd) {
      std::vector<Packet> packets;
      if (traffic_worst) {
        if (traffic_rules.empty()) throw ConfigError("--worst-case needs --rules <path>");
        const Ruleset companion = load_ruleset(traffic_rules);
        packets = generate_traffic(worst_case_profile(profile.count, profile.seed), companion);
      } else {
        packets = generate_traffic(profile);
      }
      write_text(format_traffic_csv(packets), traffic_out, out);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoOrParse;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoOrParse;
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoOrParse;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitIoOrParse;
  }
  return kExitConfig;
}

}  // namespace pfw::cli
