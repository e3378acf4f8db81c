#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "strips/domain.h"

namespace strips {

// Query/key/value parameter per (head, action) pair, stored row-major as
// [head][action][component]. Entries are kept in [0,1] by training.
class Theta {
 public:
  enum Component : std::size_t { query = 0, key = 1, value = 2 };
  static constexpr std::size_t kComponents = 3;

  Theta() = default;
  Theta(std::size_t heads, std::size_t actions, double fill = 0.0);

  std::size_t heads() const noexcept { return heads_; }
  std::size_t actions() const noexcept { return actions_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t index(std::size_t head, std::size_t action, std::size_t component) const noexcept {
    return (head * actions_ + action) * kComponents + component;
  }

  double& operator()(std::size_t head, std::size_t action, std::size_t component) {
    return data_[index(head, action, component)];
  }
  double operator()(std::size_t head, std::size_t action, std::size_t component) const {
    return data_[index(head, action, component)];
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool is_binary() const;
  bool within_unit_interval() const;

  // Projection onto [0,1]^(heads x actions x 3).
  void clamp_to_unit();

  bool operator==(const Theta&) const = default;

 private:
  std::size_t heads_ = 0;
  std::size_t actions_ = 0;
  std::vector<double> data_;
};

// Dense n x n matrix, row-major.
class SquareMatrix {
 public:
  explicit SquareMatrix(std::size_t n = 0) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

struct HeadRecord {
  std::vector<double> query;
  std::vector<double> key;
  std::vector<double> value;
  SquareMatrix scores;     // Q K^T with j >= i zeroed
  SquareMatrix attention;  // stick-breaking normalised scores
  std::vector<double> output;
};

struct ForwardRecord {
  std::vector<HeadRecord> heads;
  std::vector<double> inconsistency;  // per-position OR over heads
  double output = 0.0;                // OR over positions
};

// S'(i,j) = S(i,j) * prod_{k>j} (1 - S(i,k)). Masked entries are expected to
// be 0 already, so they contribute factor 1.
SquareMatrix stick_breaking(const SquareMatrix& scores);

// 1 where the domain puts the atom in pre / add ∪ del / del respectively.
Theta theta_star(const Domain& domain);

// Full forward pass keeping every intermediate. Throws DomainError for action
// indices outside theta, std::invalid_argument for an empty trace.
ForwardRecord forward(const Theta& theta, std::span<const ActionId> trace);

// Per-position inconsistency only, in O(heads * n^2) time and O(n) memory.
// Uses the left-to-right stick-breaking recurrence
//   r <- r * (1 - s_j) + s_j * v_j
// which expands to the same sum as the suffix-product form.
std::vector<double> position_inconsistency(const Theta& theta, std::span<const ActionId> trace);

// Thresholds every entry at 0.5 (>= 0.5 maps to 1).
Theta binarize(const Theta& theta);

// Boolean classifier of a binary theta. Throws std::invalid_argument if theta
// has entries other than 0 and 1.
TraceVerdict boolean_forward(const Theta& binary, std::span<const ActionId> trace);

// Reads a STRIPS model off a binary theta: query -> pre, key & !value -> add,
// key & value -> del.
Domain extract_model(const Theta& binary, std::span<const std::string> atom_names,
                     std::span<const std::string> action_names,
                     std::string name = "extracted");

}  // namespace strips
