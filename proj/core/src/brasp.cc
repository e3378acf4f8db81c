#include "strips/brasp.h"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace strips::brasp {

// ---------------------------------------------------------------------------
// BoolExpr

BoolExpr BoolExpr::constant(bool value) {
  BoolExpr e;
  e.kind_ = Kind::constant;
  e.value_ = value;
  return e;
}

BoolExpr BoolExpr::ref(std::string vector, Side side) {
  BoolExpr e;
  e.kind_ = Kind::ref;
  e.vector_ = std::move(vector);
  e.side_ = side;
  return e;
}

BoolExpr BoolExpr::negate(BoolExpr operand) {
  BoolExpr e;
  e.kind_ = Kind::negation;
  e.operands_.push_back(std::move(operand));
  return e;
}

BoolExpr BoolExpr::all_of(std::vector<BoolExpr> operands) {
  if (operands.empty()) return constant(true);
  if (operands.size() == 1) return std::move(operands.front());
  BoolExpr e;
  e.kind_ = Kind::conjunction;
  e.operands_ = std::move(operands);
  return e;
}

BoolExpr BoolExpr::any_of(std::vector<BoolExpr> operands) {
  if (operands.empty()) return constant(false);
  if (operands.size() == 1) return std::move(operands.front());
  BoolExpr e;
  e.kind_ = Kind::disjunction;
  e.operands_ = std::move(operands);
  return e;
}

bool BoolExpr::uses_side_j() const {
  if (kind_ == Kind::ref) return side_ == Side::j;
  return std::any_of(operands_.begin(), operands_.end(),
                     [](const BoolExpr& e) { return e.uses_side_j(); });
}

std::string BoolExpr::to_string() const {
  switch (kind_) {
    case Kind::constant:
      return value_ ? "1" : "0";
    case Kind::ref:
      return vector_ + (side_ == Side::i ? "(i)" : "(j)");
    case Kind::negation: {
      const BoolExpr& inner = operands_.front();
      const bool atomic = inner.kind_ == Kind::constant || inner.kind_ == Kind::ref ||
                          inner.kind_ == Kind::negation;
      return "!" + (atomic ? inner.to_string() : "(" + inner.to_string() + ")");
    }
    case Kind::conjunction:
    case Kind::disjunction: {
      const char* sep = kind_ == Kind::conjunction ? " & " : " | ";
      std::string out;
      for (std::size_t k = 0; k < operands_.size(); ++k) {
        const BoolExpr& op = operands_[k];
        const bool nested = (op.kind_ == Kind::conjunction || op.kind_ == Kind::disjunction) &&
                            op.kind_ != kind_;
        if (k > 0) out += sep;
        out += nested ? "(" + op.to_string() + ")" : op.to_string();
      }
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Program

const std::string& operation_name(const Operation& op) {
  return std::visit([](const auto& o) -> const std::string& { return o.name; }, op);
}

std::string initial_vector_name(const std::string& token) { return "I_" + token; }

namespace {

void check_refs(const BoolExpr& expr, const std::unordered_map<std::string, std::size_t>& defined,
                bool allow_j, const std::string& where) {
  if (expr.kind() == BoolExpr::Kind::ref) {
    if (!defined.contains(expr.vector())) {
      throw BraspError(where + ": reference to undefined vector '" + expr.vector() + "'");
    }
    if (expr.side() == Side::j && !allow_j) {
      throw BraspError(where + ": side-j reference '" + expr.vector() +
                       "(j)' outside an attention score/value predicate");
    }
    return;
  }
  for (const auto& op : expr.operands()) check_refs(op, defined, allow_j, where);
}

std::string mask_text(Mask mask) {
  switch (mask) {
    case Mask::none:
      return "1";
    case Mask::before:
      return "j < i";
    case Mask::after:
      return "j > i";
  }
  return "?";
}

}  // namespace

void Program::validate() const {
  std::unordered_map<std::string, std::size_t> defined;
  for (const auto& token : alphabet) {
    if (!defined.emplace(initial_vector_name(token), defined.size()).second) {
      throw BraspError("duplicate token '" + token + "' in alphabet");
    }
  }
  for (const auto& op : ops) {
    const std::string& name = operation_name(op);
    if (const auto* pw = std::get_if<PositionWise>(&op)) {
      check_refs(pw->expr, defined, false, name);
    } else {
      const auto& att = std::get<Attention>(op);
      check_refs(att.score, defined, true, name + " score");
      check_refs(att.value, defined, true, name + " value");
      check_refs(att.fallback, defined, false, name + " default");
    }
    if (!defined.emplace(name, defined.size()).second) {
      throw BraspError("vector '" + name + "' defined twice");
    }
  }
  if (!defined.contains(output)) {
    throw BraspError("output vector '" + output + "' is not defined");
  }
}

std::string Program::dump() const {
  std::ostringstream out;
  out << "input:";
  for (const auto& token : alphabet) out << ' ' << token;
  out << '\n';
  for (const auto& op : ops) {
    if (const auto* pw = std::get_if<PositionWise>(&op)) {
      out << pw->name << "(i) := " << pw->expr.to_string() << '\n';
    } else {
      const auto& att = std::get<Attention>(op);
      out << att.name << "(i) := "
          << (att.direction == Direction::argmax ? "argmax_j" : "argmin_j") << " ["
          << mask_text(att.mask) << ", " << att.score.to_string() << "] "
          << att.value.to_string() << " : " << att.fallback.to_string() << '\n';
    }
  }
  out << "output: " << output << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Record

Record::Record(std::vector<std::string> tokens, std::vector<std::string> names,
               std::vector<std::vector<std::uint8_t>> vectors)
    : tokens_(std::move(tokens)), names_(std::move(names)), vectors_(std::move(vectors)) {}

const std::vector<std::uint8_t>& Record::at(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw BraspError("record has no vector '" + name + "'");
  return vectors_[static_cast<std::size_t>(it - names_.begin())];
}

std::string Record::dump() const {
  std::size_t label_width = 0;
  for (const auto& name : names_) label_width = std::max(label_width, name.size());
  std::size_t cell_width = 1;
  for (const auto& token : tokens_) cell_width = std::max(cell_width, token.size());

  auto pad = [](const std::string& text, std::size_t width) {
    return text + std::string(width - text.size(), ' ');
  };

  std::ostringstream out;
  std::string header = std::string(label_width, ' ');
  for (const auto& token : tokens_) header += ' ' + pad(token, cell_width);
  while (!header.empty() && header.back() == ' ') header.pop_back();
  out << header << '\n';
  for (std::size_t v = 0; v < names_.size(); ++v) {
    std::string row = pad(names_[v], label_width);
    for (std::uint8_t bit : vectors_[v]) row += ' ' + pad(bit ? "1" : "0", cell_width);
    while (!row.empty() && row.back() == ' ') row.pop_back();
    out << row << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Interpreter

struct Interpreter::Lowered {
  struct Node {
    BoolExpr::Kind kind;
    Side side;
    bool value;
    std::uint32_t slot;
    std::uint32_t first;  // into children
    std::uint32_t count;
  };

  struct Op {
    bool attention;
    Direction direction;
    Mask mask;
    std::uint32_t expr;      // position-wise body or attention score
    std::uint32_t value;
    std::uint32_t fallback;
  };

  std::vector<Node> nodes;
  std::vector<std::uint32_t> children;
  std::vector<Op> ops;
  std::vector<std::string> names;
  std::uint32_t output_slot = 0;

  std::uint32_t lower(const BoolExpr& expr,
                      const std::unordered_map<std::string, std::size_t>& slots) {
    Node node{expr.kind(), expr.side(), expr.value(), 0, 0, 0};
    if (expr.kind() == BoolExpr::Kind::ref) {
      node.slot = static_cast<std::uint32_t>(slots.at(expr.vector()));
    }
    std::vector<std::uint32_t> kids;
    for (const auto& op : expr.operands()) kids.push_back(lower(op, slots));
    node.first = static_cast<std::uint32_t>(children.size());
    node.count = static_cast<std::uint32_t>(kids.size());
    children.insert(children.end(), kids.begin(), kids.end());
    nodes.push_back(node);
    return static_cast<std::uint32_t>(nodes.size() - 1);
  }

  bool eval(std::uint32_t index, const std::vector<std::vector<std::uint8_t>>& vectors,
            std::size_t i, std::size_t j) const {
    const Node& node = nodes[index];
    switch (node.kind) {
      case BoolExpr::Kind::constant:
        return node.value;
      case BoolExpr::Kind::ref:
        return vectors[node.slot][node.side == Side::i ? i : j] != 0;
      case BoolExpr::Kind::negation:
        return !eval(children[node.first], vectors, i, j);
      case BoolExpr::Kind::conjunction:
        for (std::uint32_t k = 0; k < node.count; ++k) {
          if (!eval(children[node.first + k], vectors, i, j)) return false;
        }
        return true;
      case BoolExpr::Kind::disjunction:
        for (std::uint32_t k = 0; k < node.count; ++k) {
          if (eval(children[node.first + k], vectors, i, j)) return true;
        }
        return false;
    }
    return false;
  }
};

Interpreter::Interpreter(Program program) : program_(std::move(program)) {
  program_.validate();
  lowered_ = std::make_unique<Lowered>();
  std::unordered_map<std::string, std::size_t> slots;
  for (const auto& token : program_.alphabet) {
    slots.emplace(initial_vector_name(token), slots.size());
    lowered_->names.push_back(initial_vector_name(token));
  }
  for (const auto& op : program_.ops) {
    Lowered::Op lowered{};
    if (const auto* pw = std::get_if<PositionWise>(&op)) {
      lowered.attention = false;
      lowered.expr = lowered_->lower(pw->expr, slots);
    } else {
      const auto& att = std::get<Attention>(op);
      lowered.attention = true;
      lowered.direction = att.direction;
      lowered.mask = att.mask;
      lowered.expr = lowered_->lower(att.score, slots);
      lowered.value = lowered_->lower(att.value, slots);
      lowered.fallback = lowered_->lower(att.fallback, slots);
    }
    lowered_->ops.push_back(lowered);
    const std::string& name = operation_name(op);
    slots.emplace(name, slots.size());
    lowered_->names.push_back(name);
  }
  lowered_->output_slot = static_cast<std::uint32_t>(slots.at(program_.output));
}

Interpreter::~Interpreter() = default;
Interpreter::Interpreter(Interpreter&&) noexcept = default;
Interpreter& Interpreter::operator=(Interpreter&&) noexcept = default;

std::vector<std::vector<std::uint8_t>> Interpreter::execute(
    std::span<const std::uint32_t> word) const {
  const std::size_t n = word.size();
  if (n == 0) throw BraspError("input word must contain at least one token");
  const std::size_t alphabet = program_.alphabet.size();

  std::vector<std::vector<std::uint8_t>> vectors;
  vectors.reserve(alphabet + lowered_->ops.size());
  for (std::size_t s = 0; s < alphabet; ++s) vectors.emplace_back(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (word[i] >= alphabet) {
      throw BraspError("token index " + std::to_string(word[i]) + " at position " +
                       std::to_string(i + 1) + " is not in the alphabet");
    }
    vectors[word[i]][i] = 1;
  }

  for (const auto& op : lowered_->ops) {
    std::vector<std::uint8_t> out(n, 0);
    if (!op.attention) {
      for (std::size_t i = 0; i < n; ++i) out[i] = lowered_->eval(op.expr, vectors, i, i);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = 0;
        std::size_t hi = n;  // candidate j in [lo, hi)
        if (op.mask == Mask::before) hi = i;
        if (op.mask == Mask::after) lo = i + 1;
        bool found = false;
        std::size_t chosen = 0;
        if (op.direction == Direction::argmin) {
          for (std::size_t j = lo; j < hi && !found; ++j) {
            if (lowered_->eval(op.expr, vectors, i, j)) {
              found = true;
              chosen = j;
            }
          }
        } else {
          for (std::size_t j = hi; j > lo && !found; --j) {
            if (lowered_->eval(op.expr, vectors, i, j - 1)) {
              found = true;
              chosen = j - 1;
            }
          }
        }
        out[i] = found ? lowered_->eval(op.value, vectors, i, chosen)
                       : lowered_->eval(op.fallback, vectors, i, i);
      }
    }
    vectors.push_back(std::move(out));
  }
  return vectors;
}

Record Interpreter::run(std::span<const std::uint32_t> word) const {
  std::vector<std::string> tokens;
  tokens.reserve(word.size());
  for (std::uint32_t t : word) {
    tokens.push_back(t < program_.alphabet.size() ? program_.alphabet[t] : std::string("?"));
  }
  return Record(std::move(tokens), lowered_->names, execute(word));
}

Record Interpreter::run(std::span<const std::string> word) const {
  std::vector<std::uint32_t> ids;
  ids.reserve(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    auto it = std::find(program_.alphabet.begin(), program_.alphabet.end(), word[i]);
    if (it == program_.alphabet.end()) {
      throw BraspError("unknown token '" + word[i] + "' at position " + std::to_string(i + 1));
    }
    ids.push_back(static_cast<std::uint32_t>(it - program_.alphabet.begin()));
  }
  return run(ids);
}

bool Interpreter::accepts(std::span<const std::uint32_t> word) const {
  auto vectors = execute(word);
  return vectors[lowered_->output_slot].back() != 0;
}

Record eval_program(const Program& program, std::span<const std::string> word) {
  return Interpreter(program).run(word);
}

// ---------------------------------------------------------------------------
// Compiler

Program compile_domain(const Domain& domain) {
  validate_domain(domain);
  Program program;
  program.alphabet = domain.action_names();

  const std::size_t atoms = domain.atom_count();
  std::vector<std::vector<BoolExpr>> query(atoms), key(atoms), value(atoms);
  for (const auto& action : domain.actions) {
    const BoolExpr token = BoolExpr::ref(initial_vector_name(action.name));
    for (AtomId p : action.pre) query[p].push_back(token);
    // add ∪ del, once per action
    std::vector<AtomId> affected = action.add;
    affected.insert(affected.end(), action.del.begin(), action.del.end());
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
    for (AtomId p : affected) key[p].push_back(token);
    for (AtomId p : action.del) value[p].push_back(token);
  }

  std::vector<BoolExpr> violations;
  for (std::size_t p = 0; p < atoms; ++p) {
    const std::string& atom = domain.atoms[p];
    const std::string q = "Q_" + atom;
    const std::string k = "K_" + atom;
    const std::string v = "V_" + atom;
    const std::string y = "Y_" + atom;
    program.ops.emplace_back(PositionWise{q, BoolExpr::any_of(std::move(query[p]))});
    program.ops.emplace_back(PositionWise{k, BoolExpr::any_of(std::move(key[p]))});
    program.ops.emplace_back(PositionWise{v, BoolExpr::any_of(std::move(value[p]))});
    program.ops.emplace_back(Attention{
        y, Direction::argmax, Mask::before,
        BoolExpr::all_of({BoolExpr::ref(q, Side::i), BoolExpr::ref(k, Side::j)}),
        BoolExpr::ref(v, Side::j), BoolExpr::constant(false)});
    violations.push_back(BoolExpr::ref(y));
  }
  program.ops.emplace_back(PositionWise{"Y", BoolExpr::any_of(std::move(violations))});
  program.ops.emplace_back(Attention{"Z", Direction::argmax, Mask::none,
                                     BoolExpr::ref("Y", Side::j), BoolExpr::constant(true),
                                     BoolExpr::constant(false)});
  program.output = "Z";
  return program;
}

bool brasp_classify(const Domain& domain, std::span<const ActionId> trace) {
  validate_trace(domain, trace);
  if (trace.empty()) return false;
  return Interpreter(compile_domain(domain)).accepts(trace);
}

}  // namespace strips::brasp
