#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "strips/datagen.h"
#include "strips/domain.h"

namespace strips::test {

// Space-separated action names to indices.
inline Trace ids(const Domain& domain, const std::string& names) {
  std::istringstream in(names);
  Trace out;
  std::string word;
  while (in >> word) out.push_back(*domain.find_action(word));
  return out;
}

// Uniform over all action sequences, so mostly negative for long traces.
inline Trace random_trace(const Domain& domain, std::size_t length, Rng& rng) {
  std::uniform_int_distribution<ActionId> pick(0, static_cast<ActionId>(domain.action_count() - 1));
  Trace out(length);
  for (auto& m : out) m = pick(rng);
  return out;
}

// Mix of uniform sequences and sampled positives, lengths 1..max_length.
inline Trace mixed_trace(const Domain& domain, std::size_t max_length, Rng& rng) {
  std::uniform_int_distribution<std::size_t> length(1, max_length);
  const std::size_t n = length(rng);
  switch (rng() % 3) {
    case 0:
      return random_trace(domain, n, rng);
    case 1:
      return sample_positive(domain, n, rng);
    default:
      return n >= 2 ? sample_negative(domain, n, rng) : random_trace(domain, n, rng);
  }
}

}  // namespace strips::test
