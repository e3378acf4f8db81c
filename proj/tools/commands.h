#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "strips/experiment.h"
#include "strips/training.h"

namespace strips::cli {

// Each command writes its report to `out` and throws on failure. An empty
// output path means "print to out" where a single artifact is produced.

struct GenOptions {
  std::string domain;
  std::size_t count = 500;
  std::optional<std::size_t> max_length;  // per-domain default when unset
  double negative_fraction = 0.8;
  bool unique = true;
  std::uint64_t seed = 0;
  std::string out;
};
void cmd_gen(const GenOptions& options, std::ostream& out);

struct GenDomainOptions {
  std::string domain;
  std::string out;
};
void cmd_gen_domain(const GenDomainOptions& options, std::ostream& out);

struct TrainOptions {
  std::string data;
  std::string domain;  // taken from the dataset header when empty
  std::optional<std::size_t> heads;
  TrainConfig train;
  LossConfig loss;
  std::string out = "run";  // output directory
  bool quiet = false;
};
// Writes theta.json, theta_binary.json, domain.json and log.jsonl into
// options.out.
void cmd_train(const TrainOptions& options, std::ostream& out);

struct EvalOptions {
  std::string theta;
  std::string data;
  std::string domain;  // taken from the dataset header when empty
};
void cmd_eval(const EvalOptions& options, std::ostream& out);

struct ExtractOptions {
  std::string theta;
  std::string name = "extracted";
  std::string out;
};
void cmd_extract(const ExtractOptions& options, std::ostream& out);

struct CompileBraspOptions {
  std::string domain;
  std::optional<std::string> trace;
};
// Program text, then a blank line and the vector table when a trace is given.
void cmd_compile_brasp(const CompileBraspOptions& options, std::ostream& out);

struct CheckOptions {
  std::string domain;
  std::string trace;
};
void cmd_check(const CheckOptions& options, std::ostream& out);

struct ReproOptions {
  std::vector<ExperimentSpec> experiments;
  std::string out;  // CSV path; the table always goes to `out`
  bool progress = true;
};
// Named grids: "desk" (simple {200,500} and ferry-1c {500}) and "table1"
// (every benchmark domain at sizes 50..2000).
std::vector<ExperimentSpec> preset_experiments(const std::string& name, const ExperimentSpec& base);
ExperimentReport cmd_repro(const ReproOptions& options, std::ostream& out, std::ostream& log);

}  // namespace strips::cli
