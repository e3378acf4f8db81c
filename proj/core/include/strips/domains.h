#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "strips/domain.h"

namespace strips {

// Instance parameters for the built-in grounded families.
struct GroundingSpec {
  enum class Family { simple, blocksworld, ferry };

  Family family = Family::simple;
  std::size_t blocks = 0;
  std::size_t ports = 0;
  std::size_t cars = 0;
};

// atoms (p, q, r); a: p,r -> q; b: q,r -> p; c: -> r.
Domain builtin_simple();

// 4-operator blocksworld with a gripper: pickup, putdown, stack, unstack.
// Blocks are named b1..bn. Atoms and actions are grouped by schema name in
// alphabetical order, then by argument tuple in object order.
Domain make_blocksworld(std::size_t blocks);

// sail(p1,p2), board(c,p), debark(c,p). Ports p1..pn, cars c1..cn.
Domain make_ferry(std::size_t ports, std::size_t cars);

Domain ground(const GroundingSpec& spec);

// "simple", "blocksworld-2b", "blocksworld-3b", "ferry-1c", "ferry-2c", plus
// the general forms "blocksworld-<n>b" and "ferry-<c>c" / "ferry-<p>p<c>c".
Domain builtin_domain(std::string_view name);

bool is_builtin_domain(std::string_view name);

// The five benchmark domain names in a fixed order.
std::vector<std::string> benchmark_domain_names();

// Training trace length bound used for each benchmark domain.
std::size_t default_max_length(std::string_view domain_name);

}  // namespace strips
