#include "commands.h"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "strips/brasp.h"
#include "strips/datagen.h"
#include "strips/domains.h"
#include "strips/io.h"
#include "strips/transformer.h"

namespace strips::cli {

namespace {

namespace fs = std::filesystem;

std::string domain_for(const std::string& explicit_domain, const DatasetFile& file) {
  if (!explicit_domain.empty()) return explicit_domain;
  auto it = file.header.find("domain");
  if (it == file.header.end() || it->second.empty()) {
    throw std::invalid_argument("dataset has no '# domain' header; pass --domain");
  }
  return it->second;
}

std::vector<std::string> head_names(const Domain& domain, std::size_t heads) {
  if (heads == domain.atom_count()) return domain.atoms;
  std::vector<std::string> names;
  for (std::size_t l = 0; l < heads; ++l) names.push_back("f" + std::to_string(l + 1));
  return names;
}

void print_stats(std::ostream& out, const AccuracyStats& stats) {
  out << "accuracy: " << std::setprecision(6) << stats.accuracy() << " (" << stats.correct << "/"
      << stats.total << ")\n";
  out << "negatives flagged: " << stats.true_negative_traces << "\n";
  out << "positives passed: " << stats.true_positive_traces << "\n";
  out << "missed violations: " << stats.missed_violations << "\n";
  out << "false violations: " << stats.false_violations << "\n";
}

}  // namespace

void cmd_gen(const GenOptions& options, std::ostream& out) {
  const Domain domain = resolve_domain(options.domain);
  DatasetConfig config;
  config.count = options.count;
  config.negative_fraction = options.negative_fraction;
  config.max_length = options.max_length.value_or(default_max_length(domain.name));
  config.seed = options.seed;
  config.unique = options.unique;
  const Dataset dataset = build_dataset(domain, config);
  if (options.out.empty()) {
    write_dataset(out, dataset, domain);
    return;
  }
  save_dataset(dataset, domain, options.out);
  out << "domain: " << domain.name << "\n"
      << "count: " << config.count << "  max length: " << config.max_length
      << "  negative fraction: " << config.negative_fraction << "  seed: " << config.seed
      << "  unique: " << (config.unique ? "yes" : "no") << "\n"
      << "negatives: " << dataset.negatives() << "  positives: " << dataset.positives() << "\n"
      << "wrote " << options.out << "\n";
}

void cmd_gen_domain(const GenDomainOptions& options, std::ostream& out) {
  const Domain domain = builtin_domain(options.domain);
  if (options.out.empty()) {
    out << domain_to_json(domain);
    return;
  }
  save_domain(domain, options.out);
  out << "domain: " << domain.name << " (" << domain.atom_count() << " atoms, "
      << domain.action_count() << " actions)\nwrote " << options.out << "\n";
}

void cmd_train(const TrainOptions& options, std::ostream& out) {
  const DatasetFile file = read_dataset_file(fs::path(options.data));
  const Domain domain = resolve_domain(domain_for(options.domain, file));
  const Dataset dataset = resolve_dataset(file, domain);
  const std::size_t heads = options.heads.value_or(domain.atom_count());
  out << "theta: " << heads << " x " << domain.action_count() << " x " << Theta::kComponents
      << "\n";

  const fs::path dir(options.out);
  fs::create_directories(dir);
  std::ofstream log(dir / "log.jsonl", std::ios::trunc);
  if (!log) throw IoError("cannot open '" + (dir / "log.jsonl").string() + "' for writing");

  const TrainResult result =
      train(dataset, heads, domain.action_count(), options.train, options.loss,
            [&](const LogRecord& record) {
              log << log_record_to_json(record) << '\n';
              if (!options.quiet) {
                out << "step " << record.step << "  loss " << std::setprecision(6) << record.loss
                    << "  train accuracy " << record.train_accuracy << "\n";
              }
            });

  const auto atoms = head_names(domain, heads);
  const auto actions = domain.action_names();
  save_theta(result.theta, atoms, actions, dir / "theta.json");
  save_theta(result.binary, atoms, actions, dir / "theta_binary.json");
  save_domain(extract_model(result.binary, atoms, actions, domain.name + "-learned"),
              dir / "domain.json");
  out << "steps: " << result.steps << "\n";
  out << "train accuracy: " << result.train_stats.accuracy() << "\n";
  out << "wrote " << (dir / "theta.json").string() << ", theta_binary.json, domain.json, log.jsonl\n";
}

void cmd_eval(const EvalOptions& options, std::ostream& out) {
  const ThetaFile theta = load_theta(options.theta);
  const DatasetFile file = read_dataset_file(fs::path(options.data));
  const Domain domain = resolve_domain(domain_for(options.domain, file));
  if (theta.theta.actions() != domain.action_count() || theta.actions != domain.action_names()) {
    throw std::invalid_argument("shape mismatch: theta is over " +
                                std::to_string(theta.theta.actions()) + " actions but domain " +
                                domain.name + " has " + std::to_string(domain.action_count()));
  }
  const Dataset dataset = resolve_dataset(file, domain);
  print_stats(out, evaluate(binarize(theta.theta), dataset.traces, domain));
}

void cmd_extract(const ExtractOptions& options, std::ostream& out) {
  const ThetaFile theta = load_theta(options.theta);
  const Domain domain =
      extract_model(binarize(theta.theta), theta.atoms, theta.actions, options.name);
  if (options.out.empty()) {
    out << domain_to_json(domain);
    return;
  }
  save_domain(domain, options.out);
  out << "wrote " << options.out << "\n";
}

void cmd_compile_brasp(const CompileBraspOptions& options, std::ostream& out) {
  const Domain domain = resolve_domain(options.domain);
  const brasp::Program program = brasp::compile_domain(domain);
  out << program.dump();
  if (!options.trace) return;
  const Trace trace = parse_trace(domain, *options.trace);
  if (trace.empty()) throw std::invalid_argument("trace is empty");
  std::vector<std::string> word;
  for (ActionId m : trace) word.push_back(domain.actions[m].name);
  const brasp::Interpreter interpreter(program);
  const brasp::Record record = interpreter.run(std::span<const std::string>(word));
  out << "\n" << record.dump();
}

void cmd_check(const CheckOptions& options, std::ostream& out) {
  const Domain domain = resolve_domain(options.domain);
  const Trace trace = parse_trace(domain, options.trace);
  if (trace.empty()) throw std::invalid_argument("trace is empty");
  const TraceVerdict verdict = classify_trace(domain, trace);
  out << (verdict.label ? "negative" : "positive") << "\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (verdict.flags[i]) {
      out << "inapplicable at " << i + 1 << ": " << domain.actions[trace[i]].name << "\n";
    }
  }
}

std::vector<ExperimentSpec> preset_experiments(const std::string& name,
                                               const ExperimentSpec& base) {
  auto with = [&](std::string domain, std::vector<std::size_t> sizes) {
    ExperimentSpec spec = base;
    spec.domain = std::move(domain);
    spec.sizes = std::move(sizes);
    return spec;
  };
  if (name == "desk") return {with("simple", {200, 500}), with("ferry-1c", {500})};
  if (name == "table1") {
    std::vector<ExperimentSpec> out;
    for (const auto& domain : benchmark_domain_names()) {
      out.push_back(with(domain, {50, 100, 200, 500, 1000, 2000}));
    }
    return out;
  }
  throw std::invalid_argument("unknown preset '" + name + "' (expected desk or table1)");
}

ExperimentReport cmd_repro(const ReproOptions& options, std::ostream& out, std::ostream& log) {
  if (options.experiments.empty()) throw std::invalid_argument("repro: nothing to run");
  for (const auto& spec : options.experiments) spec.validate();
  ExperimentReport report;
  for (const auto& spec : options.experiments) {
    auto part = run_experiment(spec, [&](const ReportRow& row) {
      if (!options.progress) return;
      log << row.domain << " size " << row.size << " seed " << row.seed << ": ";
      if (row.error) {
        log << "error: " << *row.error;
      } else {
        log << "train " << row.train_accuracy << " test " << row.test_accuracy
            << (row.exact_recovery ? " recovered" : "") << " (" << std::fixed
            << std::setprecision(1) << row.seconds << "s)" << std::defaultfloat
            << std::setprecision(6);
      }
      log << std::endl;
    });
    report.rows.insert(report.rows.end(), part.rows.begin(), part.rows.end());
  }
  report.aggregates = aggregate(report.rows);
  if (!options.out.empty()) {
    std::ostringstream csv;
    write_report_csv(csv, report);
    write_text_file(options.out, csv.str());
  }
  write_report_table(out, report);
  if (!options.out.empty()) out << "wrote " << options.out << "\n";
  return report;
}

}  // namespace strips::cli
