#include "strips/domain.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace strips {

namespace {

void check_atom_list(const Domain& domain, const Action& action,
                     std::span<const AtomId> list, const char* list_name) {
  std::unordered_set<AtomId> seen;
  for (AtomId atom : list) {
    if (atom >= domain.atom_count()) {
      throw DomainError(DomainError::Kind::out_of_range,
                        "action '" + action.name + "': " + list_name +
                            " references atom index " + std::to_string(atom) +
                            " but the domain has " +
                            std::to_string(domain.atom_count()) + " atoms");
    }
    if (!seen.insert(atom).second) {
      throw DomainError(DomainError::Kind::duplicate_name,
                        "action '" + action.name + "': atom '" +
                            domain.atoms[atom] + "' listed twice in " + list_name);
    }
  }
}

}  // namespace

std::optional<AtomId> Domain::find_atom(std::string_view atom) const {
  auto it = std::find(atoms.begin(), atoms.end(), atom);
  if (it == atoms.end()) return std::nullopt;
  return static_cast<AtomId>(it - atoms.begin());
}

std::optional<ActionId> Domain::find_action(std::string_view action) const {
  auto it = std::find_if(actions.begin(), actions.end(),
                         [&](const Action& a) { return a.name == action; });
  if (it == actions.end()) return std::nullopt;
  return static_cast<ActionId>(it - actions.begin());
}

std::vector<std::string> Domain::action_names() const {
  std::vector<std::string> names;
  names.reserve(actions.size());
  for (const auto& a : actions) names.push_back(a.name);
  return names;
}

Domain make_domain(std::string name, std::vector<std::string> atoms,
                   std::span<const NamedAction> actions) {
  Domain domain{std::move(name), std::move(atoms), {}};
  std::unordered_map<std::string_view, AtomId> index;
  for (std::size_t l = 0; l < domain.atoms.size(); ++l) {
    index.emplace(domain.atoms[l], static_cast<AtomId>(l));
  }

  auto resolve = [&](const NamedAction& action, const std::vector<std::string>& names,
                     const char* list_name) {
    std::vector<AtomId> ids;
    ids.reserve(names.size());
    for (const auto& atom : names) {
      auto it = index.find(atom);
      if (it == index.end()) {
        throw DomainError(DomainError::Kind::unknown_atom,
                          "action '" + action.name + "': " + list_name +
                              " references unknown atom '" + atom + "'");
      }
      ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
  };

  domain.actions.reserve(actions.size());
  for (const auto& action : actions) {
    domain.actions.push_back(Action{action.name, resolve(action, action.pre, "pre"),
                                    resolve(action, action.add, "add"),
                                    resolve(action, action.del, "del")});
  }
  validate_domain(domain);
  return domain;
}

void validate_domain(const Domain& domain) {
  std::unordered_set<std::string_view> names;
  for (const auto& atom : domain.atoms) {
    if (!names.insert(atom).second) {
      throw DomainError(DomainError::Kind::duplicate_name,
                        "duplicate atom name '" + atom + "'");
    }
  }
  names.clear();
  for (const auto& action : domain.actions) {
    if (!names.insert(action.name).second) {
      throw DomainError(DomainError::Kind::duplicate_name,
                        "duplicate action name '" + action.name + "'");
    }
    check_atom_list(domain, action, action.pre, "pre");
    check_atom_list(domain, action, action.add, "add");
    check_atom_list(domain, action, action.del, "del");
  }
}

void validate_trace(const Domain& domain, std::span<const ActionId> trace) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i] >= domain.action_count()) {
      throw DomainError(DomainError::Kind::out_of_range,
                        "trace position " + std::to_string(i + 1) +
                            ": action index " + std::to_string(trace[i]) +
                            " out of range (domain has " +
                            std::to_string(domain.action_count()) + " actions)");
    }
  }
}

State State::from_atoms(std::size_t atom_count, std::span<const AtomId> true_atoms) {
  State state(atom_count);
  for (AtomId atom : true_atoms) state.set(atom, true);
  return state;
}

State apply(const Domain& domain, const State& state, ActionId action) {
  if (action >= domain.action_count()) {
    throw DomainError(DomainError::Kind::out_of_range,
                      "action index " + std::to_string(action) + " out of range");
  }
  const Action& a = domain.actions[action];
  State next = state;
  for (AtomId atom : a.add) next.set(atom, true);
  for (AtomId atom : a.del) next.set(atom, false);
  return next;
}

bool applicable(const Domain& domain, const State& state, ActionId action) {
  if (action >= domain.action_count()) {
    throw DomainError(DomainError::Kind::out_of_range,
                      "action index " + std::to_string(action) + " out of range");
  }
  const auto& pre = domain.actions[action].pre;
  return std::all_of(pre.begin(), pre.end(),
                     [&](AtomId atom) { return state.holds(atom); });
}

bool WriterTable::consistent(const Action& action) const {
  return std::none_of(action.pre.begin(), action.pre.end(), [&](AtomId atom) {
    return status_[atom] == AtomStatus::made_false;
  });
}

void WriterTable::record(const Action& action) {
  for (AtomId atom : action.add) status_[atom] = AtomStatus::made_true;
  for (AtomId atom : action.del) status_[atom] = AtomStatus::made_false;
}

TraceVerdict classify_trace(const Domain& domain, std::span<const ActionId> trace) {
  validate_trace(domain, trace);
  TraceVerdict verdict;
  verdict.flags.resize(trace.size(), 0);
  WriterTable writers(domain.atom_count());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Action& action = domain.actions[trace[i]];
    if (!writers.consistent(action)) {
      verdict.flags[i] = 1;
      verdict.label = 1;
    }
    writers.record(action);
  }
  return verdict;
}

std::vector<ActionId> possible_next(const Domain& domain,
                                    std::span<const ActionId> prefix) {
  validate_trace(domain, prefix);
  WriterTable writers(domain.atom_count());
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const Action& action = domain.actions[prefix[i]];
    if (!writers.consistent(action)) {
      throw std::invalid_argument("possible_next: prefix is negative (position " +
                                  std::to_string(i + 1) + " is inconsistent)");
    }
    writers.record(action);
  }
  std::vector<ActionId> next;
  for (std::size_t m = 0; m < domain.action_count(); ++m) {
    if (writers.consistent(domain.actions[m])) next.push_back(static_cast<ActionId>(m));
  }
  return next;
}

}  // namespace strips
