#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pfw/engines.hpp"

namespace pfw::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitIoOrParse = 1,
  kExitConfig = 2,
  kExitDivergence = 3,
};

struct ClassifyOptions {
  std::string rules_path;
  std::string traffic_path;
  Model model = Model::kSequential;
  std::size_t nodes = 1;
  std::size_t batch = 1024;
};

// Writes `id,verdict,matched_index` per packet; `-` when no rule matched.
int cmd_classify(const ClassifyOptions& opts, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::string rules_path;
  std::string traffic_path;
  std::vector<std::size_t> nodes{1, 2, 3, 4, 8, 64};
  std::size_t batch = 1024;
};

// Every model at every node count against the reference classifier.
// `aggregator` replaces the coordinator merge of the partitioned models.
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err,
               AggregateFn aggregator = &aggregate);

// Full command line, argv[0] included. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pfw::cli
