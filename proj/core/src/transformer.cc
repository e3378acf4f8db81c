#include "strips/transformer.h"

#include <algorithm>
#include <stdexcept>

namespace strips {

namespace {

void check_trace(const Theta& theta, std::span<const ActionId> trace) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i] >= theta.actions()) {
      throw DomainError(DomainError::Kind::out_of_range,
                        "trace position " + std::to_string(i + 1) + ": action index " +
                            std::to_string(trace[i]) + " out of range (theta has " +
                            std::to_string(theta.actions()) + " actions)");
    }
  }
}

}  // namespace

Theta::Theta(std::size_t heads, std::size_t actions, double fill)
    : heads_(heads), actions_(actions), data_(heads * actions * kComponents, fill) {}

bool Theta::is_binary() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return x == 0.0 || x == 1.0; });
}

bool Theta::within_unit_interval() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return x >= 0.0 && x <= 1.0; });
}

void Theta::clamp_to_unit() {
  for (double& x : data_) x = std::clamp(x, 0.0, 1.0);
}

SquareMatrix stick_breaking(const SquareMatrix& scores) {
  const std::size_t n = scores.size();
  SquareMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double keep = 1.0;
      for (std::size_t k = j + 1; k < n; ++k) keep *= 1.0 - scores(i, k);
      out(i, j) = scores(i, j) * keep;
    }
  }
  return out;
}

Theta theta_star(const Domain& domain) {
  validate_domain(domain);
  Theta theta(domain.atom_count(), domain.action_count());
  for (std::size_t m = 0; m < domain.action_count(); ++m) {
    const Action& action = domain.actions[m];
    for (AtomId l : action.pre) theta(l, m, Theta::query) = 1.0;
    for (AtomId l : action.add) theta(l, m, Theta::key) = 1.0;
    for (AtomId l : action.del) {
      theta(l, m, Theta::key) = 1.0;
      theta(l, m, Theta::value) = 1.0;
    }
  }
  return theta;
}

ForwardRecord forward(const Theta& theta, std::span<const ActionId> trace) {
  check_trace(theta, trace);
  const std::size_t n = trace.size();
  if (n == 0) throw std::invalid_argument("forward: trace must not be empty");

  ForwardRecord record;
  record.heads.reserve(theta.heads());
  for (std::size_t l = 0; l < theta.heads(); ++l) {
    HeadRecord head{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                    SquareMatrix(n), SquareMatrix(n), std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
      head.query[i] = theta(l, trace[i], Theta::query);
      head.key[i] = theta(l, trace[i], Theta::key);
      head.value[i] = theta(l, trace[i], Theta::value);
    }
    // Scores with strict future masking: only j < i survives.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) head.scores(i, j) = head.query[i] * head.key[j];
    }
    head.attention = stick_breaking(head.scores);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) sum += head.attention(i, j) * head.value[j];
      head.output[i] = sum;
    }
    record.heads.push_back(std::move(head));
  }

  record.inconsistency.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double none = 1.0;
    for (const auto& head : record.heads) none *= 1.0 - head.output[i];
    record.inconsistency[i] = 1.0 - none;
  }
  double none = 1.0;
  for (double y : record.inconsistency) none *= 1.0 - y;
  record.output = 1.0 - none;
  return record;
}

std::vector<double> position_inconsistency(const Theta& theta, std::span<const ActionId> trace) {
  check_trace(theta, trace);
  const std::size_t n = trace.size();
  std::vector<double> consistent(n, 1.0);
  for (std::size_t l = 0; l < theta.heads(); ++l) {
    for (std::size_t i = 1; i < n; ++i) {
      const double q = theta(l, trace[i], Theta::query);
      if (q == 0.0) continue;
      double r = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        const double s = q * theta(l, trace[j], Theta::key);
        r = r * (1.0 - s) + s * theta(l, trace[j], Theta::value);
      }
      consistent[i] *= 1.0 - r;
    }
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 - consistent[i];
  return y;
}

Theta binarize(const Theta& theta) {
  Theta out = theta;
  for (double& x : out.values()) x = x >= 0.5 ? 1.0 : 0.0;
  return out;
}

TraceVerdict boolean_forward(const Theta& binary, std::span<const ActionId> trace) {
  if (!binary.is_binary()) {
    throw std::invalid_argument("boolean_forward: theta is not binary; binarize it first");
  }
  const std::vector<double> y = position_inconsistency(binary, trace);
  TraceVerdict verdict;
  verdict.flags.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    // All factors are 0 or 1, so y is exactly 0 or 1.
    verdict.flags[i] = y[i] == 1.0 ? 1 : 0;
    verdict.label |= verdict.flags[i];
  }
  return verdict;
}

Domain extract_model(const Theta& binary, std::span<const std::string> atom_names,
                     std::span<const std::string> action_names, std::string name) {
  if (!binary.is_binary()) {
    throw std::invalid_argument("extract_model: theta is not binary; binarize it first");
  }
  if (atom_names.size() != binary.heads() || action_names.size() != binary.actions()) {
    throw std::invalid_argument(
        "extract_model: theta is " + std::to_string(binary.heads()) + " x " +
        std::to_string(binary.actions()) + " but got " + std::to_string(atom_names.size()) +
        " atom names and " + std::to_string(action_names.size()) + " action names");
  }
  Domain domain;
  domain.name = std::move(name);
  domain.atoms.assign(atom_names.begin(), atom_names.end());
  for (std::size_t m = 0; m < binary.actions(); ++m) {
    Action action{action_names[m], {}, {}, {}};
    for (std::size_t l = 0; l < binary.heads(); ++l) {
      const auto atom = static_cast<AtomId>(l);
      if (binary(l, m, Theta::query) == 1.0) action.pre.push_back(atom);
      if (binary(l, m, Theta::key) == 1.0) {
        if (binary(l, m, Theta::value) == 1.0) {
          action.del.push_back(atom);
        } else {
          action.add.push_back(atom);
        }
      }
    }
    domain.actions.push_back(std::move(action));
  }
  validate_domain(domain);
  return domain;
}

}  // namespace strips
