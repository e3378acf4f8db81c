#include "strips/datagen.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace strips {

namespace {

constexpr double kEnumerationGuard = 1e7;

// Walks forward from an empty trace drawing uniformly among actions that keep
// the trace positive (and executable, if an initial state is given).
std::optional<Trace> try_positive(const Domain& domain, std::size_t length, Rng& rng,
                                  const SamplerOptions& options) {
  WriterTable writers(domain.atom_count());
  std::optional<State> state = options.initial_state;
  Trace trace;
  trace.reserve(length);
  std::vector<ActionId> candidates;
  while (trace.size() < length) {
    candidates.clear();
    for (std::size_t m = 0; m < domain.action_count(); ++m) {
      const auto id = static_cast<ActionId>(m);
      if (!writers.consistent(domain.actions[m])) continue;
      if (state && !applicable(domain, *state, id)) continue;
      candidates.push_back(id);
    }
    if (candidates.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    const ActionId chosen = candidates[pick(rng)];
    writers.record(domain.actions[chosen]);
    if (state) *state = apply(domain, *state, chosen);
    trace.push_back(chosen);
  }
  return trace;
}

}  // namespace

void DatasetConfig::validate() const {
  if (!(negative_fraction >= 0.0 && negative_fraction <= 1.0)) {
    throw std::invalid_argument("negative fraction must lie in [0,1]");
  }
  if (max_length < 1) throw std::invalid_argument("max length must be at least 1");
  if (negative_fraction > 0.0 && count > 0 && max_length < 2) {
    throw std::invalid_argument("negative traces need max length >= 2");
  }
}

std::size_t Dataset::negatives() const {
  return static_cast<std::size_t>(std::count_if(
      traces.begin(), traces.end(), [](const LabeledTrace& t) { return t.label != 0; }));
}

Trace sample_positive(const Domain& domain, std::size_t length, Rng& rng,
                      const SamplerOptions& options) {
  if (length < 1) throw std::invalid_argument("sample_positive: length must be at least 1");
  if (domain.action_count() == 0) {
    throw std::invalid_argument("sample_positive: domain has no actions");
  }
  for (std::size_t attempt = 0; attempt < options.max_retries; ++attempt) {
    if (auto trace = try_positive(domain, length, rng, options)) return *trace;
  }
  throw DatagenError("no positive trace of length " + std::to_string(length) + " found in " +
                     std::to_string(options.max_retries) + " attempts");
}

Trace sample_negative(const Domain& domain, std::size_t length, Rng& rng,
                      const SamplerOptions& options) {
  if (length < 2) {
    throw std::invalid_argument("sample_negative: length must be at least 2");
  }
  std::vector<ActionId> inapplicable;
  for (std::size_t attempt = 0; attempt < options.max_retries; ++attempt) {
    auto prefix = try_positive(domain, length - 1, rng, options);
    if (!prefix) continue;
    WriterTable writers(domain.atom_count());
    for (ActionId m : *prefix) writers.record(domain.actions[m]);
    inapplicable.clear();
    for (std::size_t m = 0; m < domain.action_count(); ++m) {
      if (!writers.consistent(domain.actions[m])) inapplicable.push_back(static_cast<ActionId>(m));
    }
    if (inapplicable.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, inapplicable.size() - 1);
    prefix->push_back(inapplicable[pick(rng)]);
    return *prefix;
  }
  throw DatagenError("no negative trace of length " + std::to_string(length) + " found in " +
                     std::to_string(options.max_retries) + " attempts");
}

Dataset build_dataset(const Domain& domain, const DatasetConfig& config,
                      const SamplerOptions& options) {
  config.validate();
  Dataset dataset{domain.name, config, {}};
  if (config.count == 0) return dataset;

  const auto negatives = static_cast<std::size_t>(
      std::ceil(static_cast<double>(config.count) * config.negative_fraction - 1e-9));
  const std::size_t positives = config.count - negatives;

  Rng rng(config.seed);
  std::set<Trace> seen;
  // Rejections allowed in a row before declaring the target unreachable.
  const std::size_t budget = std::max<std::size_t>(20000, 50 * config.count);

  auto fill = [&](std::size_t wanted, std::uint8_t label) {
    const std::size_t min_length = label ? 2 : 1;
    std::uniform_int_distribution<std::size_t> pick_length(min_length, config.max_length);
    std::size_t produced = 0;
    std::size_t rejected = 0;
    while (produced < wanted) {
      const std::size_t length = pick_length(rng);
      Trace trace = label ? sample_negative(domain, length, rng, options)
                          : sample_positive(domain, length, rng, options);
      if (config.unique && !seen.insert(trace).second) {
        if (++rejected > budget) {
          throw DatagenError("not enough unique " + std::string(label ? "negative" : "positive") +
                             " traces of length <= " + std::to_string(config.max_length) +
                             " in " + domain.name + ": found " + std::to_string(produced) +
                             " of " + std::to_string(wanted));
        }
        continue;
      }
      rejected = 0;
      dataset.traces.push_back(LabeledTrace{std::move(trace), label});
      ++produced;
    }
  };
  fill(negatives, 1);
  fill(positives, 0);

  std::shuffle(dataset.traces.begin(), dataset.traces.end(), rng);
  return dataset;
}

void enumerate_traces(const Domain& domain, std::size_t max_length,
                      const std::function<void(const Trace&, std::uint8_t)>& visit) {
  const std::size_t actions = domain.action_count();
  if (std::pow(static_cast<double>(actions), static_cast<double>(max_length)) > kEnumerationGuard) {
    throw DatagenError("enumerate_traces: " + std::to_string(actions) + "^" +
                       std::to_string(max_length) + " traces exceed the 10^7 guard");
  }
  if (actions == 0) return;
  for (std::size_t length = 1; length <= max_length; ++length) {
    Trace trace(length, 0);
    while (true) {
      visit(trace, classify_trace(domain, trace).label);
      // Odometer increment, last position fastest.
      std::size_t pos = length;
      while (pos > 0 && trace[pos - 1] + 1 == actions) {
        trace[pos - 1] = 0;
        --pos;
      }
      if (pos == 0) break;
      ++trace[pos - 1];
    }
  }
}

std::vector<LabeledTrace> enumerate_traces(const Domain& domain, std::size_t max_length) {
  std::vector<LabeledTrace> out;
  enumerate_traces(domain, max_length,
                   [&](const Trace& t, std::uint8_t label) { out.push_back({t, label}); });
  return out;
}

}  // namespace strips
