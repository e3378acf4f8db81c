#include "strips/domains.h"

#include <charconv>
#include <map>
#include <optional>
#include <stdexcept>

namespace strips {

namespace {

std::string object(char prefix, std::size_t index) {
  return std::string(1, prefix) + std::to_string(index + 1);
}

std::string atom(std::string_view schema, std::initializer_list<std::string> args) {
  std::string out(schema);
  if (args.size() == 0) return out;
  out += '(';
  bool first = true;
  for (const auto& arg : args) {
    if (!first) out += ',';
    out += arg;
    first = false;
  }
  out += ')';
  return out;
}

std::optional<std::size_t> parse_count(std::string_view text) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

Domain builtin_simple() {
  const std::vector<NamedAction> actions{
      {"a", {"p", "r"}, {"q"}, {"p", "r"}},
      {"b", {"q", "r"}, {"p"}, {"q", "r"}},
      {"c", {}, {"r"}, {}},
  };
  return make_domain("simple", {"p", "q", "r"}, actions);
}

Domain make_blocksworld(std::size_t blocks) {
  if (blocks == 0) throw std::invalid_argument("make_blocksworld: need at least one block");

  std::vector<std::string> atoms;
  for (std::size_t x = 0; x < blocks; ++x) atoms.push_back(atom("clear", {object('b', x)}));
  atoms.push_back("handempty");
  for (std::size_t x = 0; x < blocks; ++x) atoms.push_back(atom("holding", {object('b', x)}));
  for (std::size_t x = 0; x < blocks; ++x) {
    for (std::size_t y = 0; y < blocks; ++y) {
      if (x != y) atoms.push_back(atom("on", {object('b', x), object('b', y)}));
    }
  }
  for (std::size_t x = 0; x < blocks; ++x) atoms.push_back(atom("ontable", {object('b', x)}));

  std::vector<NamedAction> actions;
  for (std::size_t x = 0; x < blocks; ++x) {
    const std::string bx = object('b', x);
    const std::string ontable = atom("ontable", {bx});
    const std::string clear = atom("clear", {bx});
    const std::string holding = atom("holding", {bx});
    actions.push_back({atom("pickup", {bx}),
                       {ontable, clear, "handempty"},
                       {holding},
                       {ontable, clear, "handempty"}});
  }
  for (std::size_t x = 0; x < blocks; ++x) {
    const std::string bx = object('b', x);
    const std::string ontable = atom("ontable", {bx});
    const std::string clear = atom("clear", {bx});
    const std::string holding = atom("holding", {bx});
    actions.push_back({atom("putdown", {bx}), {holding}, {ontable, clear, "handempty"}, {holding}});
  }
  for (std::size_t x = 0; x < blocks; ++x) {
    for (std::size_t y = 0; y < blocks; ++y) {
      if (x == y) continue;
      const std::string bx = object('b', x);
      const std::string by = object('b', y);
      actions.push_back({atom("stack", {bx, by}),
                         {atom("holding", {bx}), atom("clear", {by})},
                         {atom("on", {bx, by}), atom("clear", {bx}), "handempty"},
                         {atom("holding", {bx}), atom("clear", {by})}});
    }
  }
  for (std::size_t x = 0; x < blocks; ++x) {
    for (std::size_t y = 0; y < blocks; ++y) {
      if (x == y) continue;
      const std::string bx = object('b', x);
      const std::string by = object('b', y);
      actions.push_back({atom("unstack", {bx, by}),
                         {atom("on", {bx, by}), atom("clear", {bx}), "handempty"},
                         {atom("holding", {bx}), atom("clear", {by})},
                         {atom("on", {bx, by}), atom("clear", {bx}), "handempty"}});
    }
  }
  return make_domain("blocksworld-" + std::to_string(blocks) + "b", std::move(atoms), actions);
}

Domain make_ferry(std::size_t ports, std::size_t cars) {
  if (ports < 2) throw std::invalid_argument("make_ferry: need at least two ports");
  if (cars < 1) throw std::invalid_argument("make_ferry: need at least one car");

  std::vector<std::string> atoms;
  for (std::size_t c = 0; c < cars; ++c) {
    for (std::size_t p = 0; p < ports; ++p) {
      atoms.push_back(atom("at", {object('c', c), object('p', p)}));
    }
  }
  for (std::size_t p = 0; p < ports; ++p) atoms.push_back(atom("at-ferry", {object('p', p)}));
  atoms.push_back("empty-ferry");
  for (std::size_t c = 0; c < cars; ++c) atoms.push_back(atom("on", {object('c', c)}));

  std::vector<NamedAction> actions;
  for (std::size_t c = 0; c < cars; ++c) {
    for (std::size_t p = 0; p < ports; ++p) {
      const std::string at = atom("at", {object('c', c), object('p', p)});
      const std::string ferry = atom("at-ferry", {object('p', p)});
      actions.push_back({atom("board", {object('c', c), object('p', p)}),
                         {at, ferry, "empty-ferry"},
                         {atom("on", {object('c', c)})},
                         {at, "empty-ferry"}});
    }
  }
  for (std::size_t c = 0; c < cars; ++c) {
    for (std::size_t p = 0; p < ports; ++p) {
      const std::string at = atom("at", {object('c', c), object('p', p)});
      const std::string on = atom("on", {object('c', c)});
      actions.push_back({atom("debark", {object('c', c), object('p', p)}),
                         {on, atom("at-ferry", {object('p', p)})},
                         {at, "empty-ferry"},
                         {on}});
    }
  }
  for (std::size_t from = 0; from < ports; ++from) {
    for (std::size_t to = 0; to < ports; ++to) {
      if (from == to) continue;
      actions.push_back({atom("sail", {object('p', from), object('p', to)}),
                         {atom("at-ferry", {object('p', from)})},
                         {atom("at-ferry", {object('p', to)})},
                         {atom("at-ferry", {object('p', from)})}});
    }
  }
  std::string name = ports == 2 ? "ferry-" + std::to_string(cars) + "c"
                                : "ferry-" + std::to_string(ports) + "p" +
                                      std::to_string(cars) + "c";
  return make_domain(std::move(name), std::move(atoms), actions);
}

Domain ground(const GroundingSpec& spec) {
  switch (spec.family) {
    case GroundingSpec::Family::simple:
      return builtin_simple();
    case GroundingSpec::Family::blocksworld:
      return make_blocksworld(spec.blocks);
    case GroundingSpec::Family::ferry:
      return make_ferry(spec.ports, spec.cars);
  }
  throw std::invalid_argument("ground: unknown family");
}

Domain builtin_domain(std::string_view name) {
  if (name == "simple") return builtin_simple();

  constexpr std::string_view kBlocks = "blocksworld-";
  if (name.starts_with(kBlocks) && name.ends_with("b")) {
    auto count = parse_count(name.substr(kBlocks.size(), name.size() - kBlocks.size() - 1));
    if (count && *count > 0) return make_blocksworld(*count);
  }

  constexpr std::string_view kFerry = "ferry-";
  if (name.starts_with(kFerry) && name.ends_with("c")) {
    std::string_view body = name.substr(kFerry.size(), name.size() - kFerry.size() - 1);
    std::size_t ports = 2;
    if (auto split = body.find('p'); split != std::string_view::npos) {
      auto parsed = parse_count(body.substr(0, split));
      if (!parsed) throw std::invalid_argument("unknown domain '" + std::string(name) + "'");
      ports = *parsed;
      body = body.substr(split + 1);
    }
    auto cars = parse_count(body);
    if (cars && *cars > 0 && ports >= 2) return make_ferry(ports, *cars);
  }
  throw std::invalid_argument("unknown domain '" + std::string(name) + "'");
}

bool is_builtin_domain(std::string_view name) {
  try {
    builtin_domain(name);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

std::vector<std::string> benchmark_domain_names() {
  return {"blocksworld-2b", "blocksworld-3b", "ferry-1c", "ferry-2c", "simple"};
}

std::size_t default_max_length(std::string_view domain_name) {
  static const std::map<std::string, std::size_t, std::less<>> kLengths{
      {"simple", 10},
      {"blocksworld-2b", 20},
      {"ferry-1c", 20},
      {"blocksworld-3b", 30},
      {"ferry-2c", 30},
  };
  auto it = kLengths.find(domain_name);
  return it == kLengths.end() ? 20 : it->second;
}

}  // namespace strips
