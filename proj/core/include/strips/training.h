#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "strips/datagen.h"
#include "strips/domain.h"
#include "strips/transformer.h"

namespace strips {

struct LossConfig {
  double alpha = 0.9;
  double gamma = 3.0;
  // Outputs are clipped to [epsilon, 1 - epsilon] before taking logs.
  double epsilon = 1e-7;

  void validate() const;
};

struct RadamConfig {
  double learning_rate = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  RadamConfig optimizer;
  std::size_t batch_size = 8;
  std::uint64_t max_steps = 100000;
  std::uint64_t seed = 0;
  // Binarized training accuracy is evaluated (and logged) every
  // eval_interval steps. With early_stop_patience set, training stops once it
  // has been 1.0 for that many consecutive evaluations.
  std::uint64_t eval_interval = 1000;
  std::optional<std::uint32_t> early_stop_patience;

  void validate() const;
};

struct OptState {
  std::uint64_t step = 0;
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  OptState() = default;
  explicit OptState(std::size_t size) : first_moment(size, 0.0), second_moment(size, 0.0) {}
};

struct LogRecord {
  std::uint64_t step = 0;
  double loss = 0.0;  // mean batch loss since the previous record
  double train_accuracy = 0.0;
};

struct AccuracyStats {
  std::size_t total = 0;
  std::size_t correct = 0;
  // Trace-level confusion; "positive class" here means a negative trace,
  // i.e. an inconsistent one.
  std::size_t true_negative_traces = 0;   // oracle 1, model 1
  std::size_t true_positive_traces = 0;   // oracle 0, model 0
  std::size_t missed_violations = 0;      // oracle 1, model 0
  std::size_t false_violations = 0;       // oracle 0, model 1

  double accuracy() const { return total == 0 ? 1.0 : static_cast<double>(correct) / total; }
};

struct TrainResult {
  Theta theta;
  Theta binary;
  std::vector<LogRecord> log;
  AccuracyStats train_stats;
  std::uint64_t steps = 0;
};

// Focal loss of one trace given its per-position outputs y.
//   positive: -(1/n) sum_i (1-a) y_i^g log(1-y_i)
//   negative: same over i < n, plus -(1/n) a (1-y_n)^g log(y_n)
// Throws std::invalid_argument for a negative trace shorter than 2.
double focal_trace_loss(std::span<const double> y, std::uint8_t label, const LossConfig& config);

double trace_loss(const Theta& theta, std::span<const ActionId> trace, std::uint8_t label,
                  const LossConfig& config);

// Mean of trace_loss. Throws std::invalid_argument for an empty batch.
double batch_loss(const Theta& theta, std::span<const LabeledTrace> batch,
                  const LossConfig& config);

// Exact derivative of batch_loss with respect to every theta entry, laid out
// like Theta::values(). Returns the batch loss as well.
double loss_and_gradient(const Theta& theta, std::span<const LabeledTrace> batch,
                         const LossConfig& config, std::span<double> gradient);

std::vector<double> gradient(const Theta& theta, std::span<const LabeledTrace> batch,
                             const LossConfig& config);

// One RAdam update followed by projection onto [0,1]. While the variance
// rectification term is undefined (rho_t <= 5) the step is plain
// bias-corrected momentum.
void radam_step(OptState& state, Theta& theta, std::span<const double> gradient,
                const RadamConfig& config);

// Per-prefix accuracy: a trace is correct iff every prefix gets the oracle's
// label. Throws std::invalid_argument for a non-binary theta.
AccuracyStats evaluate(const Theta& binary, std::span<const LabeledTrace> traces,
                       const Domain& oracle);

// Same criterion using the dataset contract instead of an oracle: positives
// have no violation, negatives exactly one at the final position.
AccuracyStats evaluate_labels(const Theta& binary, std::span<const LabeledTrace> traces);

using TrainObserver = std::function<void(const LogRecord&)>;

// Theta ~ Uniform[0,1] from config.seed, shuffled mini-batches per epoch.
// Deterministic for a fixed seed, config and dataset.
TrainResult train(const Dataset& dataset, std::size_t heads, std::size_t actions,
                  const TrainConfig& config, const LossConfig& loss,
                  const TrainObserver& observer = {});

}  // namespace strips
