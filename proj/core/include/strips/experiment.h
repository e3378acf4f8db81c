#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "strips/domain.h"
#include "strips/training.h"

namespace strips {

// One grid of training runs on a single domain: every (size, seed) pair is
// trained on the dataset for that size and scored on a shared test set.
struct ExperimentSpec {
  std::string domain;  // builtin name or domain file path
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  // Training trace length bound; the per-domain default when unset.
  std::optional<std::size_t> max_length;
  std::size_t test_positives = 5000;
  std::size_t test_negatives = 5000;
  std::size_t test_max_length = 50;
  // Seeds the training and test datasets; training seeds only seed theta
  // initialisation and batch order.
  std::uint64_t data_seed = 0;
  // Attention heads; the domain's atom count when unset.
  std::optional<std::size_t> heads;
  TrainConfig train;
  LossConfig loss;
  // Joint-state budget for the exact-recovery check before it falls back to
  // sampling.
  std::size_t recovery_max_states = 200000;
  std::size_t jobs = 1;

  // Throws std::invalid_argument for an empty size or seed list.
  void validate() const;
};

struct ReportRow {
  std::string domain;
  std::size_t size = 0;
  std::uint64_t seed = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  bool exact_recovery = false;
  double seconds = 0.0;
  std::uint64_t steps = 0;
  // Set when any stage failed; the accuracies are then meaningless.
  std::optional<std::string> error;
};

// Table-style summary of the successful rows for one (domain, size).
struct AggregateRow {
  std::string domain;
  std::size_t size = 0;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double train_mean = 0.0;
  double train_std = 0.0;  // population standard deviation
  double test_mean = 0.0;
  double test_std = 0.0;
  // Seed with the best training accuracy, ties to the lowest seed.
  std::uint64_t best_seed = 0;
  double best_train = 0.0;
  double best_test = 0.0;
  bool best_recovered = false;
  std::size_t recovered = 0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;  // ordered by (size, seed) as in the spec
  std::vector<AggregateRow> aggregates;
};

using RowObserver = std::function<void(const ReportRow&)>;

// Runs the grid. Stage failures are recorded on the affected rows and the
// grid continues. Rows do not depend on `jobs`.
ExperimentReport run_experiment(const ExperimentSpec& spec, const RowObserver& observer = {});

// One aggregate per distinct (domain, size) in first-appearance order.
std::vector<AggregateRow> aggregate(const std::vector<ReportRow>& rows);

// Header: domain,size,seed,train_acc,test_acc,exact_recovery,seconds. Per-seed
// rows come first, then "mean", "std" and "best" rows per (domain, size).
// Failed rows leave the accuracy fields empty and set exact_recovery to
// "error".
void write_report_csv(std::ostream& out, const ExperimentReport& report);

// Human-readable table with mean±std (best) cells.
void write_report_table(std::ostream& out, const ExperimentReport& report);

}  // namespace strips
