#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "strips/domain.h"

namespace strips {

using Rng = std::mt19937_64;

class DatagenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LabeledTrace {
  Trace trace;
  std::uint8_t label = 0;  // 1 = negative

  bool operator==(const LabeledTrace&) const = default;
};

struct DatasetConfig {
  std::size_t count = 0;
  double negative_fraction = 0.8;
  std::size_t max_length = 10;
  std::uint64_t seed = 0;
  bool unique = true;

  void validate() const;
};

struct Dataset {
  std::string domain_name;
  DatasetConfig config;
  std::vector<LabeledTrace> traces;

  std::size_t size() const noexcept { return traces.size(); }
  std::size_t negatives() const;
  std::size_t positives() const { return traces.size() - negatives(); }
};

struct SamplerOptions {
  // Attempts per trace before giving up.
  std::size_t max_retries = 1000;
  // When set, positive extensions must also be applicable by progression from
  // this state, i.e. traces are executable from it rather than merely
  // internally consistent.
  std::optional<State> initial_state;
};

// Uniform extension over possible_next; restarts on dead ends. Throws
// DatagenError if no positive trace of this length is found.
Trace sample_positive(const Domain& domain, std::size_t length, Rng& rng,
                      const SamplerOptions& options = {});

// Positive prefix of length-1 followed by a uniformly chosen action that is
// not a possible next action. The single violation is at the last position.
Trace sample_negative(const Domain& domain, std::size_t length, Rng& rng,
                      const SamplerOptions& options = {});

// ceil(count * negative_fraction) negatives, the rest positives. Lengths are
// uniform in [1, N] for positives and [2, N] for negatives. Throws
// DatagenError when uniqueness cannot be met within the rejection budget.
Dataset build_dataset(const Domain& domain, const DatasetConfig& config,
                      const SamplerOptions& options = {});

// Every trace of length 1..max_length in lexicographic order with its label.
// Throws DatagenError if |A|^max_length exceeds 10^7.
void enumerate_traces(const Domain& domain, std::size_t max_length,
                      const std::function<void(const Trace&, std::uint8_t)>& visit);

std::vector<LabeledTrace> enumerate_traces(const Domain& domain, std::size_t max_length);

}  // namespace strips
