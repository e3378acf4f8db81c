#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "strips/domain.h"

namespace strips {

struct EquivalenceResult {
  bool equivalent = false;
  // True when the joint writer-table space was searched completely, in which
  // case `equivalent` is a proof rather than a sampled estimate.
  bool exhaustive = false;
  // Shortest trace found whose final position is classified differently.
  std::optional<Trace> counterexample;
};

struct EquivalenceOptions {
  std::size_t max_states = 1'000'000;
  // Fallback when the state cap is hit: random walks over traces that are
  // positive in both models.
  std::size_t sample_walks = 20'000;
  std::size_t sample_length = 50;
  std::uint64_t seed = 0;
};

// Decides whether two models over the same action list assign the same label
// to every trace. The models may have different atom sets.
//
// The label of every extension of a trace depends only on the pair of writer
// tables reached by that trace, so a breadth-first search over jointly
// positive traces visits every distinguishing situation.
EquivalenceResult check_equivalence(const Domain& lhs, const Domain& rhs,
                                    const EquivalenceOptions& options = {});

}  // namespace strips
