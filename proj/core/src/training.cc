#include "strips/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace strips {

namespace {

struct Clipped {
  double value;
  bool passes_gradient;
};

Clipped clip(double y, double epsilon) {
  if (y < epsilon) return {epsilon, false};
  if (y > 1.0 - epsilon) return {1.0 - epsilon, false};
  return {y, true};
}

// Loss term for a position whose target is "consistent" (y -> 0).
double consistent_term(double c, const LossConfig& cfg) {
  return -(1.0 - cfg.alpha) * std::pow(c, cfg.gamma) * std::log1p(-c);
}

double consistent_term_derivative(double c, const LossConfig& cfg) {
  return -(1.0 - cfg.alpha) * (cfg.gamma * std::pow(c, cfg.gamma - 1.0) * std::log1p(-c) -
                               std::pow(c, cfg.gamma) / (1.0 - c));
}

// Loss term for the final position of a negative trace (y -> 1).
double violation_term(double c, const LossConfig& cfg) {
  return -cfg.alpha * std::pow(1.0 - c, cfg.gamma) * std::log(c);
}

double violation_term_derivative(double c, const LossConfig& cfg) {
  return -cfg.alpha * (-cfg.gamma * std::pow(1.0 - c, cfg.gamma - 1.0) * std::log(c) +
                       std::pow(1.0 - c, cfg.gamma) / c);
}

void check_label(std::size_t n, std::uint8_t label) {
  if (label > 1) throw std::invalid_argument("label must be 0 or 1");
  if (label == 1 && n < 2) {
    throw std::invalid_argument("negative trace must have at least two actions");
  }
  if (n == 0) throw std::invalid_argument("trace must not be empty");
}

// Accumulates d(scale * trace_loss)/d(theta) into `grad`; returns trace_loss.
double accumulate_trace_gradient(const Theta& theta, std::span<const ActionId> trace,
                                 std::uint8_t label, const LossConfig& cfg, double scale,
                                 std::span<double> grad) {
  const std::size_t n = trace.size();
  const std::size_t heads = theta.heads();
  check_label(n, label);
  for (std::size_t i = 0; i < n; ++i) {
    if (trace[i] >= theta.actions()) {
      throw DomainError(DomainError::Kind::out_of_range,
                        "action index " + std::to_string(trace[i]) + " out of range");
    }
  }

  // Head outputs, [head][position].
  std::vector<double> head_out(heads * n, 0.0);
  std::vector<double> prefix(n + 1);
  for (std::size_t l = 0; l < heads; ++l) {
    for (std::size_t i = 1; i < n; ++i) {
      const double q = theta(l, trace[i], Theta::query);
      double r = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        const double s = q * theta(l, trace[j], Theta::key);
        r = r * (1.0 - s) + s * theta(l, trace[j], Theta::value);
      }
      head_out[l * n + i] = r;
    }
  }

  // Loss and dL/dy per position.
  std::vector<double> d_y(n, 0.0);
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> before(heads + 1);
  for (std::size_t i = 0; i < n; ++i) {
    before[0] = 1.0;
    for (std::size_t l = 0; l < heads; ++l) before[l + 1] = before[l] * (1.0 - head_out[l * n + i]);
    const double y = 1.0 - before[heads];
    const Clipped c = clip(y, cfg.epsilon);
    const bool violation = label == 1 && i + 1 == n;
    loss += violation ? violation_term(c.value, cfg) : consistent_term(c.value, cfg);
    if (c.passes_gradient) {
      d_y[i] = inv_n * (violation ? violation_term_derivative(c.value, cfg)
                                  : consistent_term_derivative(c.value, cfg));
    }
  }
  loss *= inv_n;

  // y = 1 - prod_l (1 - y_l)  =>  dy/dy_l = prod_{l' != l} (1 - y_l').
  std::vector<double> d_head(heads * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (d_y[i] == 0.0) continue;
    double after = 1.0;
    before[0] = 1.0;
    for (std::size_t l = 0; l < heads; ++l) before[l + 1] = before[l] * (1.0 - head_out[l * n + i]);
    for (std::size_t l = heads; l-- > 0;) {
      d_head[l * n + i] = d_y[i] * before[l] * after;
      after *= 1.0 - head_out[l * n + i];
    }
  }

  // Back through stick-breaking: with r_j the running output before position
  // j and keep_j = prod_{j<k<i} (1 - s_k),
  //   dy_l(i)/ds_j = keep_j (v_j - r_j),   dy_l(i)/dv_j = s_j keep_j.
  for (std::size_t l = 0; l < heads; ++l) {
    for (std::size_t i = 1; i < n; ++i) {
      const double g = scale * d_head[l * n + i];
      if (g == 0.0) continue;
      const double q = theta(l, trace[i], Theta::query);
      prefix[0] = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        const double s = q * theta(l, trace[j], Theta::key);
        prefix[j + 1] = prefix[j] * (1.0 - s) + s * theta(l, trace[j], Theta::value);
      }
      double keep = 1.0;
      double d_q = 0.0;
      for (std::size_t j = i; j-- > 0;) {
        const double k = theta(l, trace[j], Theta::key);
        const double v = theta(l, trace[j], Theta::value);
        const double s = q * k;
        const double d_s = g * keep * (v - prefix[j]);
        d_q += d_s * k;
        grad[theta.index(l, trace[j], Theta::key)] += d_s * q;
        grad[theta.index(l, trace[j], Theta::value)] += g * s * keep;
        keep *= 1.0 - s;
      }
      grad[theta.index(l, trace[i], Theta::query)] += d_q;
    }
  }
  return loss;
}

}  // namespace

void LossConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0,0.5)");
}

void TrainConfig::validate() const {
  if (!(optimizer.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (max_steps == 0) throw std::invalid_argument("step count must be positive");
  if (eval_interval == 0) throw std::invalid_argument("evaluation interval must be positive");
  if (!(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0) ||
      !(optimizer.beta2 >= 0.0 && optimizer.beta2 < 1.0)) {
    throw std::invalid_argument("moment decays must lie in [0,1)");
  }
}

double focal_trace_loss(std::span<const double> y, std::uint8_t label, const LossConfig& config) {
  const std::size_t n = y.size();
  check_label(n, label);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = clip(y[i], config.epsilon).value;
    sum += (label == 1 && i + 1 == n) ? violation_term(c, config) : consistent_term(c, config);
  }
  return sum / static_cast<double>(n);
}

double trace_loss(const Theta& theta, std::span<const ActionId> trace, std::uint8_t label,
                  const LossConfig& config) {
  check_label(trace.size(), label);
  return focal_trace_loss(forward(theta, trace).inconsistency, label, config);
}

double batch_loss(const Theta& theta, std::span<const LabeledTrace> batch,
                  const LossConfig& config) {
  if (batch.empty()) throw std::invalid_argument("batch must not be empty");
  double sum = 0.0;
  for (const auto& item : batch) sum += trace_loss(theta, item.trace, item.label, config);
  return sum / static_cast<double>(batch.size());
}

double loss_and_gradient(const Theta& theta, std::span<const LabeledTrace> batch,
                         const LossConfig& config, std::span<double> gradient) {
  if (batch.empty()) throw std::invalid_argument("batch must not be empty");
  if (gradient.size() != theta.size()) {
    throw std::invalid_argument("gradient buffer does not match theta");
  }
  std::fill(gradient.begin(), gradient.end(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double sum = 0.0;
  for (const auto& item : batch) {
    sum += accumulate_trace_gradient(theta, item.trace, item.label, config, scale, gradient);
  }
  return sum * scale;
}

std::vector<double> gradient(const Theta& theta, std::span<const LabeledTrace> batch,
                             const LossConfig& config) {
  std::vector<double> g(theta.size(), 0.0);
  loss_and_gradient(theta, batch, config, g);
  return g;
}

void radam_step(OptState& state, Theta& theta, std::span<const double> gradient,
                const RadamConfig& config) {
  if (gradient.size() != theta.size() || state.first_moment.size() != theta.size() ||
      state.second_moment.size() != theta.size()) {
    throw std::invalid_argument("radam_step: optimizer state, gradient and theta shapes differ");
  }
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double b1 = config.beta1;
  const double b2 = config.beta2;
  const double correction1 = 1.0 - std::pow(b1, t);
  const double correction2 = 1.0 - std::pow(b2, t);
  const double rho_inf = 2.0 / (1.0 - b2) - 1.0;
  const double rho_t = rho_inf - 2.0 * t * std::pow(b2, t) / correction2;
  const bool rectified = rho_t > 5.0;
  const double rect =
      rectified ? std::sqrt((rho_t - 4.0) * (rho_t - 2.0) * rho_inf /
                            ((rho_inf - 4.0) * (rho_inf - 2.0) * rho_t))
                : 0.0;

  auto params = theta.values();
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = gradient[k];
    double& m = state.first_moment[k];
    double& v = state.second_moment[k];
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    const double m_hat = m / correction1;
    if (rectified) {
      const double adaptive = std::sqrt(correction2) / (std::sqrt(v) + config.epsilon);
      params[k] -= config.learning_rate * m_hat * rect * adaptive;
    } else {
      params[k] -= config.learning_rate * m_hat;
    }
  }
  theta.clamp_to_unit();
}

namespace {

void tally(AccuracyStats& stats, std::span<const std::uint8_t> model_flags,
           std::span<const std::uint8_t> oracle_flags) {
  bool model_running = false;
  bool oracle_running = false;
  bool correct = true;
  for (std::size_t i = 0; i < model_flags.size(); ++i) {
    model_running = model_running || model_flags[i];
    oracle_running = oracle_running || oracle_flags[i];
    if (model_running != oracle_running) correct = false;
  }
  stats.total += 1;
  stats.correct += correct ? 1 : 0;
  if (oracle_running && model_running) stats.true_negative_traces += 1;
  if (!oracle_running && !model_running) stats.true_positive_traces += 1;
  if (oracle_running && !model_running) stats.missed_violations += 1;
  if (!oracle_running && model_running) stats.false_violations += 1;
}

}  // namespace

AccuracyStats evaluate(const Theta& binary, std::span<const LabeledTrace> traces,
                       const Domain& oracle) {
  if (!binary.is_binary()) throw std::invalid_argument("evaluate: theta is not binary");
  AccuracyStats stats;
  for (const auto& item : traces) {
    tally(stats, boolean_forward(binary, item.trace).flags,
          classify_trace(oracle, item.trace).flags);
  }
  return stats;
}

AccuracyStats evaluate_labels(const Theta& binary, std::span<const LabeledTrace> traces) {
  if (!binary.is_binary()) throw std::invalid_argument("evaluate: theta is not binary");
  AccuracyStats stats;
  std::vector<std::uint8_t> expected;
  for (const auto& item : traces) {
    expected.assign(item.trace.size(), 0);
    if (item.label && !expected.empty()) expected.back() = 1;
    tally(stats, boolean_forward(binary, item.trace).flags, expected);
  }
  return stats;
}

TrainResult train(const Dataset& dataset, std::size_t heads, std::size_t actions,
                  const TrainConfig& config, const LossConfig& loss,
                  const TrainObserver& observer) {
  config.validate();
  loss.validate();
  if (dataset.traces.empty()) throw std::invalid_argument("train: dataset is empty");
  for (const auto& item : dataset.traces) {
    check_label(item.trace.size(), item.label);
    for (ActionId m : item.trace) {
      if (m >= actions) {
        throw DomainError(DomainError::Kind::out_of_range,
                          "dataset action index " + std::to_string(m) + " out of range");
      }
    }
  }

  Rng rng(config.seed);
  TrainResult result;
  result.theta = Theta(heads, actions);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double& x : result.theta.values()) x = unit(rng);

  OptState state(result.theta.size());
  std::vector<double> grad(result.theta.size());
  std::vector<std::size_t> order(dataset.traces.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();
  std::vector<LabeledTrace> batch;

  double loss_sum = 0.0;
  std::uint64_t loss_count = 0;
  std::uint32_t perfect_streak = 0;

  for (std::uint64_t step = 1; step <= config.max_steps; ++step) {
    if (cursor >= order.size()) {
      std::shuffle(order.begin(), order.end(), rng);
      cursor = 0;
    }
    const std::size_t take = std::min(config.batch_size, order.size() - cursor);
    batch.resize(take);
    for (std::size_t b = 0; b < take; ++b) batch[b] = dataset.traces[order[cursor + b]];
    cursor += take;

    loss_sum += loss_and_gradient(result.theta, batch, loss, grad);
    loss_count += 1;
    radam_step(state, result.theta, grad, config.optimizer);
    result.steps = step;

    if (step % config.eval_interval == 0 || step == config.max_steps) {
      const AccuracyStats stats = evaluate_labels(binarize(result.theta), dataset.traces);
      LogRecord record{step, loss_sum / static_cast<double>(loss_count), stats.accuracy()};
      loss_sum = 0.0;
      loss_count = 0;
      result.log.push_back(record);
      if (observer) observer(record);
      perfect_streak = stats.correct == stats.total ? perfect_streak + 1 : 0;
      if (config.early_stop_patience && perfect_streak >= *config.early_stop_patience) break;
    }
  }

  result.binary = binarize(result.theta);
  result.train_stats = evaluate_labels(result.binary, dataset.traces);
  return result;
}

}  // namespace strips
