#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "strips/domain.h"

namespace strips::brasp {

class BraspError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Which position a vector reference reads: the query position i, or the
// attended position j (only meaningful inside score and value predicates).
enum class Side : std::uint8_t { i, j };

// Boolean formula tree over previously defined vectors.
class BoolExpr {
 public:
  enum class Kind : std::uint8_t { constant, ref, negation, conjunction, disjunction };

  // Constant 0.
  BoolExpr() = default;

  static BoolExpr constant(bool value);
  static BoolExpr ref(std::string vector, Side side = Side::i);
  static BoolExpr negate(BoolExpr operand);
  // Empty conjunction is 1, empty disjunction is 0. Single-operand lists
  // collapse to the operand.
  static BoolExpr all_of(std::vector<BoolExpr> operands);
  static BoolExpr any_of(std::vector<BoolExpr> operands);

  Kind kind() const noexcept { return kind_; }
  bool value() const noexcept { return value_; }
  const std::string& vector() const noexcept { return vector_; }
  Side side() const noexcept { return side_; }
  const std::vector<BoolExpr>& operands() const noexcept { return operands_; }

  bool uses_side_j() const;

  // e.g. "Q_p(i) & K_p(j)", "I_a(i) | I_b(i)", "0".
  std::string to_string() const;

 private:
  Kind kind_ = Kind::constant;
  bool value_ = false;
  std::string vector_;
  Side side_ = Side::i;
  std::vector<BoolExpr> operands_;
};

enum class Direction : std::uint8_t { argmin, argmax };

// none: every j; before: j < i (strict future masking); after: j > i.
enum class Mask : std::uint8_t { none, before, after };

struct PositionWise {
  std::string name;
  BoolExpr expr;
};

// P(i) := V(i, j_i) where j_i is the min/max j with mask(i,j) and S(i,j),
// otherwise D(i).
struct Attention {
  std::string name;
  Direction direction = Direction::argmax;
  Mask mask = Mask::none;
  BoolExpr score;
  BoolExpr value;
  BoolExpr fallback;
};

using Operation = std::variant<PositionWise, Attention>;

const std::string& operation_name(const Operation& op);

// Initial vectors are named I_<token> for every token in the alphabet.
struct Program {
  std::vector<std::string> alphabet;
  std::vector<Operation> ops;
  std::string output;

  // Throws BraspError on duplicate names, forward or unknown references,
  // side-j references outside attention predicates, or a missing output.
  void validate() const;

  // One definition per line, e.g.
  //   Y_p(i) := argmax_j [j < i, Q_p(i) & K_p(j)] V_p(j) : 0
  std::string dump() const;
};

std::string initial_vector_name(const std::string& token);

// Every vector (initial and defined) of one execution, in definition order.
class Record {
 public:
  Record(std::vector<std::string> tokens, std::vector<std::string> names,
         std::vector<std::vector<std::uint8_t>> vectors);

  std::size_t length() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  // Throws BraspError for an unknown name.
  const std::vector<std::uint8_t>& at(const std::string& name) const;

  // Tabular layout with the input word as header row:
  //        a c c b c a
  //   I_a  1 0 0 0 0 1
  std::string dump() const;

 private:
  std::vector<std::string> tokens_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::uint8_t>> vectors_;
};

// Validates and lowers a program once so it can be run on many inputs.
class Interpreter {
 public:
  explicit Interpreter(Program program);
  ~Interpreter();
  Interpreter(Interpreter&&) noexcept;
  Interpreter& operator=(Interpreter&&) noexcept;

  const Program& program() const noexcept { return program_; }

  // Token indices refer to program().alphabet.
  Record run(std::span<const std::uint32_t> word) const;
  Record run(std::span<const std::string> word) const;

  // Value of the output vector at the last position.
  bool accepts(std::span<const std::uint32_t> word) const;

 private:
  struct Lowered;

  std::vector<std::vector<std::uint8_t>> execute(std::span<const std::uint32_t> word) const;

  Program program_;
  std::unique_ptr<Lowered> lowered_;
};

Record eval_program(const Program& program, std::span<const std::string> word);

// Classifier for internal consistency: per atom p, Q_p/K_p/V_p as ORs of
// initial vectors, Y_p by rightmost strictly-earlier attention, then Y as the
// OR over atoms and Z as "some position has Y set". Output is Z.
Program compile_domain(const Domain& domain);

// Z(n) of the compiled program on `trace`. Empty traces are positive.
bool brasp_classify(const Domain& domain, std::span<const ActionId> trace);

}  // namespace strips::brasp
