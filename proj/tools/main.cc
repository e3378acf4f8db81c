#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.h"

namespace {

struct TrainFlags {
  std::uint64_t steps = 100000;
  double lr = 0.02;
  std::size_t batch = 8;
  double alpha = 0.9;
  double gamma = 3.0;
  std::uint64_t eval_interval = 1000;
  std::optional<std::uint32_t> patience;
  std::optional<std::size_t> heads;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--steps", steps, "Optimizer steps")->capture_default_str();
    cmd->add_option("--lr", lr, "RAdam learning rate")->capture_default_str();
    cmd->add_option("--batch", batch, "Traces per batch")->capture_default_str();
    cmd->add_option("--alpha", alpha, "Focal loss weight of negative targets")
        ->capture_default_str();
    cmd->add_option("--gamma", gamma, "Focal loss focusing exponent")->capture_default_str();
    cmd->add_option("--eval-interval", eval_interval, "Steps between log records")
        ->capture_default_str();
    cmd->add_option("--early-stop-patience", patience,
                    "Stop after this many consecutive evaluations at train accuracy 1.0");
    cmd->add_option("--heads", heads, "Attention heads (default: number of atoms)");
  }

  void apply(strips::TrainConfig& train, strips::LossConfig& loss, std::uint64_t seed) const {
    train.max_steps = steps;
    train.optimizer.learning_rate = lr;
    train.batch_size = batch;
    train.eval_interval = eval_interval;
    train.early_stop_patience = patience;
    train.seed = seed;
    loss.alpha = alpha;
    loss.gamma = gamma;
  }
};

}  // namespace

int main(int argc, char** argv) {
  using namespace strips::cli;

  CLI::App app{"Learn propositional STRIPS models from action traces"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--out", out, "Output path");

  GenOptions gen;
  std::optional<std::size_t> gen_max_len;
  bool gen_allow_duplicates = false;
  auto* gen_cmd = app.add_subcommand("gen", "Sample a labelled trace dataset");
  gen_cmd->add_option("--domain", gen.domain, "Builtin domain name or domain file")->required();
  gen_cmd->add_option("--count", gen.count, "Number of traces")->capture_default_str();
  gen_cmd->add_option("--max-len", gen_max_len, "Maximum trace length (default per domain)");
  gen_cmd->add_option("--negative-fraction", gen.negative_fraction, "Share of negative traces")
      ->capture_default_str();
  gen_cmd->add_flag("--allow-duplicates", gen_allow_duplicates, "Do not enforce unique traces");

  GenDomainOptions gen_domain;
  auto* gen_domain_cmd = app.add_subcommand("gen-domain", "Write a grounded builtin domain file");
  gen_domain_cmd
      ->add_option("domain", gen_domain.domain,
                   "simple, blocksworld-<n>b, ferry-<c>c or ferry-<p>p<c>c")
      ->required();

  TrainOptions train_options;
  TrainFlags train_flags;
  bool train_quiet = false;
  auto* train_cmd = app.add_subcommand("train", "Train a STRIPS transformer on a dataset");
  train_cmd->add_option("--data", train_options.data, "Dataset file")->required();
  train_cmd->add_option("--domain", train_options.domain,
                        "Domain for resolving action names (default: dataset header)");
  train_cmd->add_flag("--quiet", train_quiet, "Do not echo log records");
  train_flags.add_to(train_cmd);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Per-prefix accuracy of a theta file on a dataset");
  eval_cmd->add_option("--theta", eval.theta, "Theta file (binarized before use)")->required();
  eval_cmd->add_option("--data", eval.data, "Dataset file")->required();
  eval_cmd->add_option("--domain", eval.domain, "Oracle domain (default: dataset header)");

  ExtractOptions extract;
  auto* extract_cmd = app.add_subcommand("extract", "Read a STRIPS domain off a theta file");
  extract_cmd->add_option("--theta", extract.theta, "Theta file")->required();
  extract_cmd->add_option("--name", extract.name, "Name of the extracted domain")
      ->capture_default_str();

  CompileBraspOptions compile;
  std::string compile_trace;
  auto* compile_cmd =
      app.add_subcommand("compile-brasp", "Print the B-RASP classifier for a domain");
  compile_cmd->add_option("--domain", compile.domain, "Builtin domain name or domain file")
      ->required();
  compile_cmd->add_option("--trace", compile_trace,
                          "Also print every vector on this trace, e.g. \"a c c b c a\"");

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Classify a trace with the consistency oracle");
  check_cmd->add_option("--domain", check.domain, "Builtin domain name or domain file")
      ->required();
  check_cmd->add_option("trace", check.trace, "Action names, e.g. \"a c a c b b\"")->required();

  std::vector<std::string> repro_domains;
  std::vector<std::size_t> repro_sizes;
  std::vector<std::uint64_t> repro_seeds;
  std::size_t repro_seed_count = 10;
  std::string repro_preset;
  strips::ExperimentSpec repro_base;
  TrainFlags repro_flags;
  std::optional<std::size_t> repro_max_len;
  bool repro_quiet = false;
  auto* repro_cmd = app.add_subcommand("repro", "Run a training grid and write a CSV report");
  repro_cmd->add_option("--domain", repro_domains, "Domains (builtin names or files)")
      ->delimiter(',');
  repro_cmd->add_option("--sizes", repro_sizes, "Training set sizes")->delimiter(',');
  auto* seeds_opt =
      repro_cmd->add_option("--seeds", repro_seeds, "Explicit training seeds")->delimiter(',');
  repro_cmd->add_option("--seed-count", repro_seed_count, "Use seeds 0..n-1")
      ->capture_default_str()
      ->excludes(seeds_opt);
  repro_cmd->add_option("--preset", repro_preset, "desk or table1");
  repro_cmd->add_option("--max-len", repro_max_len, "Training trace length (default per domain)");
  repro_cmd->add_option("--test-positives", repro_base.test_positives)->capture_default_str();
  repro_cmd->add_option("--test-negatives", repro_base.test_negatives)->capture_default_str();
  repro_cmd->add_option("--test-max-len", repro_base.test_max_length)->capture_default_str();
  repro_cmd->add_option("--jobs", repro_base.jobs, "Parallel training runs")->capture_default_str();
  repro_cmd->add_flag("--quiet", repro_quiet, "No per-run progress on stderr");
  repro_flags.add_to(repro_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) {
      gen.max_length = gen_max_len;
      gen.unique = !gen_allow_duplicates;
      gen.seed = seed;
      gen.out = out;
      cmd_gen(gen, std::cout);
    } else if (gen_domain_cmd->parsed()) {
      gen_domain.out = out;
      cmd_gen_domain(gen_domain, std::cout);
    } else if (train_cmd->parsed()) {
      train_flags.apply(train_options.train, train_options.loss, seed);
      train_options.heads = train_flags.heads;
      train_options.quiet = train_quiet;
      if (!out.empty()) train_options.out = out;
      cmd_train(train_options, std::cout);
    } else if (eval_cmd->parsed()) {
      cmd_eval(eval, std::cout);
    } else if (extract_cmd->parsed()) {
      extract.out = out;
      cmd_extract(extract, std::cout);
    } else if (compile_cmd->parsed()) {
      if (!compile_trace.empty()) compile.trace = compile_trace;
      cmd_compile_brasp(compile, std::cout);
    } else if (check_cmd->parsed()) {
      cmd_check(check, std::cout);
    } else if (repro_cmd->parsed()) {
      repro_flags.apply(repro_base.train, repro_base.loss, 0);
      repro_base.heads = repro_flags.heads;
      repro_base.max_length = repro_max_len;
      repro_base.data_seed = seed;
      if (!repro_seeds.empty() || seeds_opt->count() > 0) {
        repro_base.seeds = repro_seeds;
      } else {
        repro_base.seeds.clear();
        for (std::uint64_t s = 0; s < repro_seed_count; ++s) repro_base.seeds.push_back(s);
      }
      ReproOptions repro;
      repro.out = out;
      repro.progress = !repro_quiet;
      if (!repro_preset.empty()) {
        repro.experiments = preset_experiments(repro_preset, repro_base);
      } else {
        if (repro_domains.empty()) throw std::invalid_argument("repro: pass --domain or --preset");
        for (const auto& domain : repro_domains) {
          strips::ExperimentSpec spec = repro_base;
          spec.domain = domain;
          spec.sizes = repro_sizes;
          repro.experiments.push_back(spec);
        }
      }
      cmd_repro(repro, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
