#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace strips {

using AtomId = std::uint32_t;
using ActionId = std::uint32_t;

// A trace is an ordered sequence of action indices into a Domain.
using Trace = std::vector<ActionId>;

// Raised for malformed domains and for indices that do not fit a domain.
class DomainError : public std::runtime_error {
 public:
  enum class Kind { duplicate_name, unknown_atom, out_of_range };

  DomainError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct Action {
  std::string name;
  std::vector<AtomId> pre;
  std::vector<AtomId> add;
  std::vector<AtomId> del;

  bool operator==(const Action&) const = default;
};

// Propositional STRIPS model <F, A>. List order defines atom and action
// indices everywhere else in the library.
struct Domain {
  std::string name;
  std::vector<std::string> atoms;
  std::vector<Action> actions;

  std::size_t atom_count() const noexcept { return atoms.size(); }
  std::size_t action_count() const noexcept { return actions.size(); }

  std::optional<AtomId> find_atom(std::string_view atom) const;
  std::optional<ActionId> find_action(std::string_view action) const;

  std::vector<std::string> action_names() const;

  bool operator==(const Domain&) const = default;
};

// Action given by atom names; the input form for make_domain.
struct NamedAction {
  std::string name;
  std::vector<std::string> pre;
  std::vector<std::string> add;
  std::vector<std::string> del;
};

// Builds a domain from names. Atom sets are stored sorted by atom index.
// Throws DomainError::unknown_atom for names not in `atoms`, and whatever
// validate_domain throws for the assembled result.
Domain make_domain(std::string name, std::vector<std::string> atoms,
                   std::span<const NamedAction> actions);

// Checks name uniqueness, index ranges and set-ness of pre/add/del.
void validate_domain(const Domain& domain);

// Throws DomainError::out_of_range if any action index is outside the domain.
void validate_trace(const Domain& domain, std::span<const ActionId> trace);

class State {
 public:
  explicit State(std::size_t atom_count) : truth_(atom_count, false) {}

  static State from_atoms(std::size_t atom_count, std::span<const AtomId> true_atoms);

  bool holds(AtomId atom) const { return truth_.at(atom); }
  void set(AtomId atom, bool value) { truth_.at(atom) = value; }
  std::size_t size() const noexcept { return truth_.size(); }

  bool operator==(const State&) const = default;

 private:
  std::vector<bool> truth_;
};

// (s ∪ add(a)) \ del(a). Applicability is not checked.
State apply(const Domain& domain, const State& state, ActionId action);

bool applicable(const Domain& domain, const State& state, ActionId action);

// Per-position verdicts. label is 1 (negative) iff any flag is set.
struct TraceVerdict {
  std::uint8_t label = 0;
  std::vector<std::uint8_t> flags;

  bool operator==(const TraceVerdict&) const = default;
};

enum class AtomStatus : std::uint8_t { untouched, made_true, made_false };

// Last-writer bookkeeping: for every atom, whether the most recent action
// that affected it added or deleted it.
class WriterTable {
 public:
  explicit WriterTable(std::size_t atom_count)
      : status_(atom_count, AtomStatus::untouched) {}

  // True iff no precondition of `action` was last made false.
  bool consistent(const Action& action) const;

  // Adds first, then deletes, so an atom in both lists ends up made_false.
  void record(const Action& action);

  AtomStatus status(AtomId atom) const { return status_.at(atom); }
  std::span<const AtomStatus> statuses() const noexcept { return status_; }

  bool operator==(const WriterTable&) const = default;

 private:
  std::vector<AtomStatus> status_;
};

// Internal-consistency oracle. Flagged actions still update the writer
// table, so later violations are reported too.
TraceVerdict classify_trace(const Domain& domain, std::span<const ActionId> trace);

// Actions b such that prefix·b is positive. Throws std::invalid_argument if
// the prefix itself is negative.
std::vector<ActionId> possible_next(const Domain& domain,
                                    std::span<const ActionId> prefix);

}  // namespace strips
