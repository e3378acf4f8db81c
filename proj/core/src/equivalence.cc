#include "strips/equivalence.h"

#include <deque>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace strips {

namespace {

std::string encode(const WriterTable& lhs, const WriterTable& rhs) {
  std::string key;
  key.reserve(lhs.statuses().size() + rhs.statuses().size());
  for (AtomStatus s : lhs.statuses()) key.push_back(static_cast<char>(s));
  for (AtomStatus s : rhs.statuses()) key.push_back(static_cast<char>(s));
  return key;
}

struct Node {
  WriterTable lhs;
  WriterTable rhs;
  std::size_t parent;
  ActionId via;
};

Trace rebuild(const std::vector<Node>& nodes, std::size_t index, ActionId last) {
  Trace trace{last};
  while (index != 0) {
    trace.push_back(nodes[index].via);
    index = nodes[index].parent;
  }
  return Trace(trace.rbegin(), trace.rend());
}

EquivalenceResult sampled_check(const Domain& lhs, const Domain& rhs,
                                const EquivalenceOptions& options) {
  std::mt19937_64 rng(options.seed);
  const std::size_t actions = lhs.action_count();
  std::vector<ActionId> jointly_positive;
  for (std::size_t walk = 0; walk < options.sample_walks; ++walk) {
    WriterTable wl(lhs.atom_count());
    WriterTable wr(rhs.atom_count());
    Trace prefix;
    for (std::size_t step = 0; step < options.sample_length; ++step) {
      jointly_positive.clear();
      for (std::size_t m = 0; m < actions; ++m) {
        const bool ok_l = wl.consistent(lhs.actions[m]);
        const bool ok_r = wr.consistent(rhs.actions[m]);
        if (ok_l != ok_r) {
          prefix.push_back(static_cast<ActionId>(m));
          return {false, false, std::move(prefix)};
        }
        if (ok_l) jointly_positive.push_back(static_cast<ActionId>(m));
      }
      if (jointly_positive.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, jointly_positive.size() - 1);
      const ActionId m = jointly_positive[pick(rng)];
      wl.record(lhs.actions[m]);
      wr.record(rhs.actions[m]);
      prefix.push_back(m);
    }
  }
  return {true, false, std::nullopt};
}

}  // namespace

EquivalenceResult check_equivalence(const Domain& lhs, const Domain& rhs,
                                    const EquivalenceOptions& options) {
  if (lhs.action_count() != rhs.action_count()) {
    throw std::invalid_argument("check_equivalence: models have " +
                                std::to_string(lhs.action_count()) + " and " +
                                std::to_string(rhs.action_count()) + " actions");
  }
  const std::size_t actions = lhs.action_count();

  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  nodes.push_back(Node{WriterTable(lhs.atom_count()), WriterTable(rhs.atom_count()), 0, 0});
  seen.emplace(encode(nodes[0].lhs, nodes[0].rhs), 0);

  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t current = frontier.front();
    frontier.pop_front();
    for (std::size_t m = 0; m < actions; ++m) {
      const Node& node = nodes[current];
      const bool ok_l = node.lhs.consistent(lhs.actions[m]);
      const bool ok_r = node.rhs.consistent(rhs.actions[m]);
      if (ok_l != ok_r) {
        return {false, true, rebuild(nodes, current, static_cast<ActionId>(m))};
      }
      // Once both flag, every extension is negative in both.
      if (!ok_l) continue;
      WriterTable next_l = node.lhs;
      WriterTable next_r = node.rhs;
      next_l.record(lhs.actions[m]);
      next_r.record(rhs.actions[m]);
      auto [it, inserted] = seen.emplace(encode(next_l, next_r), nodes.size());
      if (!inserted) continue;
      if (nodes.size() >= options.max_states) return sampled_check(lhs, rhs, options);
      nodes.push_back(Node{std::move(next_l), std::move(next_r), current,
                           static_cast<ActionId>(m)});
      frontier.push_back(it->second);
    }
  }
  return {true, true, std::nullopt};
}

}  // namespace strips
