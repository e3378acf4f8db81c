#include <gtest/gtest.h>

#include <cctype>
#include <string>

#include "strips/datagen.h"
#include "strips/domains.h"
#include "test_util.h"

namespace strips {
namespace {

TEST(BuiltinSimple, ShapeAndPreconditions) {
  const Domain d = builtin_simple();
  EXPECT_EQ(d.atom_count(), 3u);
  EXPECT_EQ(d.action_count(), 3u);
  EXPECT_TRUE(d.actions[*d.find_action("c")].pre.empty());
  EXPECT_EQ(classify_trace(d, test::ids(d, "a c c b c a")).label, 0);
}

struct Shape {
  const char* name;
  std::size_t atoms;
  std::size_t actions;
};

void PrintTo(const Shape& s, std::ostream* os) { *os << s.name; }

class GroundedShapes : public ::testing::TestWithParam<Shape> {};

TEST_P(GroundedShapes, AtomAndActionCounts) {
  const Shape s = GetParam();
  const Domain d = builtin_domain(s.name);
  EXPECT_EQ(d.atom_count(), s.atoms);
  EXPECT_EQ(d.action_count(), s.actions);
  EXPECT_NO_THROW(validate_domain(d));
}

INSTANTIATE_TEST_SUITE_P(Counts, GroundedShapes,
                         ::testing::Values(Shape{"blocksworld-1b", 4, 2},
                                           Shape{"blocksworld-2b", 9, 8},
                                           Shape{"blocksworld-3b", 16, 18},
                                           Shape{"ferry-1c", 6, 6}, Shape{"ferry-2c", 9, 10},
                                           Shape{"ferry-3p1c", 8, 12}),
                         [](const ::testing::TestParamInfo<Shape>& info) {
                           std::string name = info.param.name;
                           for (char& c : name) {
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           }
                           return name;
                         });

TEST(Blocksworld, ActionSemantics) {
  const Domain d = make_blocksworld(2);
  const Action& stack = d.actions[*d.find_action("stack(b1,b2)")];
  auto atom = [&](const char* name) { return *d.find_atom(name); };
  EXPECT_EQ(stack.pre, (std::vector<AtomId>{atom("clear(b2)"), atom("holding(b1)")}));
  EXPECT_EQ(stack.add,
            (std::vector<AtomId>{atom("clear(b1)"), atom("handempty"), atom("on(b1,b2)")}));
  EXPECT_EQ(stack.del, (std::vector<AtomId>{atom("clear(b2)"), atom("holding(b1)")}));
  EXPECT_FALSE(d.find_action("stack(b1,b1)").has_value());
}

TEST(Blocksworld, ExecutablePlanIsPositive) {
  const Domain d = make_blocksworld(2);
  const Trace plan = test::ids(d, "pickup(b1) stack(b1,b2) unstack(b1,b2) putdown(b1)");
  EXPECT_EQ(classify_trace(d, plan).label, 0);
  std::vector<AtomId> init;
  for (const char* name : {"clear(b1)", "clear(b2)", "ontable(b1)", "ontable(b2)", "handempty"}) {
    init.push_back(*d.find_atom(name));
  }
  State s = State::from_atoms(d.atom_count(), init);
  for (ActionId m : plan) {
    ASSERT_TRUE(applicable(d, s, m));
    s = apply(d, s, m);
  }
  EXPECT_EQ(classify_trace(d, test::ids(d, "pickup(b1) pickup(b2)")).label, 1);
}

TEST(Ferry, ActionSemantics) {
  const Domain d = make_ferry(2, 1);
  auto atom = [&](const char* name) { return *d.find_atom(name); };
  const Action& board = d.actions[*d.find_action("board(c1,p1)")];
  EXPECT_EQ(board.pre,
            (std::vector<AtomId>{atom("at(c1,p1)"), atom("at-ferry(p1)"), atom("empty-ferry")}));
  EXPECT_EQ(board.add, (std::vector<AtomId>{atom("on(c1)")}));
  EXPECT_EQ(board.del, (std::vector<AtomId>{atom("at(c1,p1)"), atom("empty-ferry")}));
  const Action& sail = d.actions[*d.find_action("sail(p1,p2)")];
  EXPECT_EQ(sail.pre, (std::vector<AtomId>{atom("at-ferry(p1)")}));
  EXPECT_EQ(sail.add, (std::vector<AtomId>{atom("at-ferry(p2)")}));
  EXPECT_EQ(sail.del, (std::vector<AtomId>{atom("at-ferry(p1)")}));
  EXPECT_EQ(classify_trace(d, test::ids(d, "board(c1,p1) sail(p1,p2) debark(c1,p2)")).label, 0);
  EXPECT_EQ(classify_trace(d, test::ids(d, "sail(p1,p2) sail(p1,p2)")).label, 1);
}

TEST(BuiltinDomain, NamesAndErrors) {
  EXPECT_EQ(builtin_domain("ferry-1c").name, "ferry-1c");
  EXPECT_EQ(builtin_domain("blocksworld-3b").name, "blocksworld-3b");
  EXPECT_EQ(builtin_domain("ferry-3p1c").name, "ferry-3p1c");
  EXPECT_THROW(builtin_domain("ferry"), std::invalid_argument);
  EXPECT_THROW(builtin_domain("blocksworld-0b"), std::invalid_argument);
  EXPECT_THROW(builtin_domain("logistics"), std::invalid_argument);
  EXPECT_TRUE(is_builtin_domain("simple"));
  EXPECT_FALSE(is_builtin_domain("simple.json"));
  EXPECT_EQ(benchmark_domain_names().size(), 5u);
}

TEST(BuiltinDomain, GroundMatchesNames) {
  EXPECT_EQ(ground({GroundingSpec::Family::blocksworld, 3, 0, 0}), make_blocksworld(3));
  EXPECT_EQ(ground({GroundingSpec::Family::ferry, 0, 2, 2}), builtin_domain("ferry-2c"));
  EXPECT_EQ(ground({GroundingSpec::Family::simple, 0, 0, 0}), builtin_simple());
}

TEST(BuiltinDomain, DefaultLengths) {
  EXPECT_EQ(default_max_length("simple"), 10u);
  EXPECT_EQ(default_max_length("blocksworld-2b"), 20u);
  EXPECT_EQ(default_max_length("ferry-1c"), 20u);
  EXPECT_EQ(default_max_length("blocksworld-3b"), 30u);
  EXPECT_EQ(default_max_length("ferry-2c"), 30u);
}

}  // namespace
}  // namespace strips
