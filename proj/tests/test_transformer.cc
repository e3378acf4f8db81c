#include <gtest/gtest.h>

#include "strips/datagen.h"
#include "strips/domains.h"
#include "strips/transformer.h"
#include "test_util.h"

namespace strips {
namespace {

using test::ids;

Theta random_theta(std::size_t heads, std::size_t actions, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Theta theta(heads, actions);
  for (double& x : theta.values()) x = unit(rng);
  return theta;
}

Theta random_binary_theta(std::size_t heads, std::size_t actions, Rng& rng) {
  std::bernoulli_distribution coin(0.3);
  Theta theta(heads, actions);
  for (double& x : theta.values()) x = coin(rng) ? 1.0 : 0.0;
  return theta;
}

TEST(ThetaStar, SimpleEntries) {
  const Domain d = builtin_simple();
  const Theta t = theta_star(d);
  auto entry = [&](const char* atom, const char* action) {
    const auto l = *d.find_atom(atom);
    const auto m = *d.find_action(action);
    return std::vector<double>{t(l, m, Theta::query), t(l, m, Theta::key), t(l, m, Theta::value)};
  };
  EXPECT_EQ(entry("p", "a"), (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(entry("r", "c"), (std::vector<double>{0, 1, 0}));
  EXPECT_EQ(entry("q", "c"), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(entry("q", "a"), (std::vector<double>{0, 1, 0}));
}

TEST(Forward, NegativeReferenceTrace) {
  const Domain d = builtin_simple();
  const ForwardRecord r = forward(theta_star(d), ids(d, "a c a c b b"));
  EXPECT_EQ(r.heads[0].output[2], 1.0);  // y_p(3)
  EXPECT_EQ(r.heads[1].output[5], 1.0);  // y_q(6)
  EXPECT_EQ(r.heads[2].output[5], 1.0);  // y_r(6)
  EXPECT_EQ(r.output, 1.0);
  EXPECT_EQ(r.inconsistency, (std::vector<double>{0, 0, 1, 0, 0, 1}));
}

TEST(Forward, PositiveTraceAndZeroTheta) {
  const Domain d = builtin_simple();
  const ForwardRecord positive = forward(theta_star(d), ids(d, "a c c b c a"));
  EXPECT_EQ(positive.output, 0.0);
  for (double y : positive.inconsistency) EXPECT_EQ(y, 0.0);

  const ForwardRecord zero = forward(Theta(3, 3), ids(d, "a b b a c"));
  EXPECT_EQ(zero.output, 0.0);
  for (double y : zero.inconsistency) EXPECT_EQ(y, 0.0);
}

TEST(Forward, Errors) {
  EXPECT_THROW(forward(Theta(3, 3), Trace{}), std::invalid_argument);
  EXPECT_THROW(forward(Theta(3, 3), Trace{0, 3}), DomainError);
}

TEST(Forward, ScoresAreMaskedAndRangesSafe) {
  Rng rng(4);
  const Domain d = builtin_domain("ferry-1c");
  for (int k = 0; k < 50; ++k) {
    const Theta theta = random_theta(d.atom_count(), d.action_count(), rng);
    const Trace t = test::random_trace(d, 1 + k % 15, rng);
    const ForwardRecord r = forward(theta, t);
    for (const auto& head : r.heads) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) {
          if (j >= i) {
            EXPECT_EQ(head.scores(i, j), 0.0);
            EXPECT_EQ(head.attention(i, j), 0.0);
          }
          EXPECT_GE(head.attention(i, j), 0.0);
          row += head.attention(i, j);
        }
        EXPECT_LE(row, 1.0 + 1e-12);  // sub-stochastic
        EXPECT_GE(head.output[i], 0.0);
        EXPECT_LE(head.output[i], 1.0);
      }
    }
    for (double y : r.inconsistency) {
      EXPECT_GE(y, 0.0);
      EXPECT_LE(y, 1.0);
    }
    EXPECT_GE(r.output, 0.0);
    EXPECT_LE(r.output, 1.0);
  }
}

TEST(PositionInconsistency, MatchesForward) {
  Rng rng(8);
  for (const auto& name : benchmark_domain_names()) {
    const Domain d = builtin_domain(name);
    for (int k = 0; k < 20; ++k) {
      const Theta theta = random_theta(d.atom_count(), d.action_count(), rng);
      const Trace t = test::random_trace(d, 1 + k, rng);
      const auto fast = position_inconsistency(theta, t);
      const auto full = forward(theta, t).inconsistency;
      ASSERT_EQ(fast.size(), full.size());
      for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(fast[i], full[i], 1e-12);
    }
  }
}

TEST(StickBreaking, BinaryScoresGiveRightmostOneHot) {
  Rng rng(21);
  std::bernoulli_distribution coin(0.4);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + k % 12;
    SquareMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) s(i, j) = coin(rng) ? 1.0 : 0.0;
    }
    const SquareMatrix a = stick_breaking(s);
    for (std::size_t i = 0; i < n; ++i) {
      std::optional<std::size_t> rightmost;
      for (std::size_t j = 0; j < n; ++j) {
        if (s(i, j) == 1.0) rightmost = j;
      }
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(a(i, j), rightmost && *rightmost == j ? 1.0 : 0.0);
      }
    }
  }
}

TEST(StickBreaking, HandComputedRow) {
  SquareMatrix s(3);
  s(2, 0) = 0.5;
  s(2, 1) = 0.25;
  const SquareMatrix a = stick_breaking(s);
  EXPECT_DOUBLE_EQ(a(2, 1), 0.25);
  EXPECT_DOUBLE_EQ(a(2, 0), 0.5 * 0.75);
}

TEST(Binarize, Threshold) {
  Theta t(1, 1);
  t(0, 0, 0) = 0.49;
  t(0, 0, 1) = 0.5;
  t(0, 0, 2) = 0.51;
  const Theta b = binarize(t);
  EXPECT_EQ(b(0, 0, 0), 0.0);
  EXPECT_EQ(b(0, 0, 1), 1.0);
  EXPECT_EQ(b(0, 0, 2), 1.0);
  EXPECT_EQ(binarize(b), b);
  const Theta star = theta_star(builtin_simple());
  EXPECT_EQ(binarize(star), star);
}

TEST(BooleanForward, Examples) {
  const Domain d = builtin_simple();
  const Theta star = theta_star(d);
  const TraceVerdict neg = boolean_forward(star, ids(d, "a c a c b b"));
  EXPECT_EQ(neg.label, 1);
  EXPECT_EQ(neg.flags, (std::vector<std::uint8_t>{0, 0, 1, 0, 0, 1}));
  EXPECT_EQ(boolean_forward(star, ids(d, "c c c c")).label, 0);
  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    const Theta bin = random_binary_theta(3, 3, rng);
    EXPECT_EQ(boolean_forward(bin, Trace{static_cast<ActionId>(k % 3)}).label, 0);
  }
  Theta fuzzy(3, 3, 0.3);
  EXPECT_THROW(boolean_forward(fuzzy, Trace{0}), std::invalid_argument);
}

TEST(BooleanForward, ThetaStarMatchesOracle) {
  Rng rng(13);
  for (const auto& name : benchmark_domain_names()) {
    const Domain d = builtin_domain(name);
    const Theta star = theta_star(d);
    for (int k = 0; k < 300; ++k) {
      const Trace t = test::mixed_trace(d, 50, rng);
      EXPECT_EQ(boolean_forward(star, t), classify_trace(d, t)) << name;
    }
  }
  const Domain simple = builtin_simple();
  for (const auto& item : enumerate_traces(simple, 4)) {
    EXPECT_EQ(boolean_forward(theta_star(simple), item.trace).label, item.label);
  }
}

TEST(ExtractModel, DefinitionCases) {
  const std::vector<std::string> atoms{"p"};
  const std::vector<std::string> actions{"a"};
  Theta del(1, 1);
  del(0, 0, Theta::key) = 1;
  del(0, 0, Theta::value) = 1;
  const Domain d1 = extract_model(del, atoms, actions);
  EXPECT_EQ(d1.actions[0].del, (std::vector<AtomId>{0}));
  EXPECT_TRUE(d1.actions[0].pre.empty());
  EXPECT_TRUE(d1.actions[0].add.empty());

  Theta pre(1, 1);
  pre(0, 0, Theta::query) = 1;
  pre(0, 0, Theta::value) = 1;
  const Domain d2 = extract_model(pre, atoms, actions);
  EXPECT_EQ(d2.actions[0].pre, (std::vector<AtomId>{0}));
  EXPECT_TRUE(d2.actions[0].add.empty());
  EXPECT_TRUE(d2.actions[0].del.empty());

  EXPECT_THROW(extract_model(Theta(1, 1, 0.2), atoms, actions), std::invalid_argument);
  EXPECT_THROW(extract_model(Theta(2, 1), atoms, actions), std::invalid_argument);
}

TEST(ExtractModel, RecoversSimple) {
  const Domain d = builtin_simple();
  const Domain back = extract_model(theta_star(d), d.atoms, d.action_names(), d.name);
  EXPECT_EQ(back, d);
}

TEST(ExtractModel, RoundTripOnBuiltins) {
  for (const auto& name : benchmark_domain_names()) {
    const Domain d = builtin_domain(name);
    const Theta star = theta_star(d);
    EXPECT_EQ(theta_star(extract_model(star, d.atoms, d.action_names())), star) << name;
  }
}

TEST(ExtractModel, CoherentWithBooleanForward) {
  Rng rng(31);
  for (const auto& name : benchmark_domain_names()) {
    const Domain d = builtin_domain(name);
    for (int k = 0; k < 10; ++k) {
      const Theta bin = random_binary_theta(d.atom_count(), d.action_count(), rng);
      const Domain m = extract_model(bin, d.atoms, d.action_names());
      for (int j = 0; j < 30; ++j) {
        const Trace t = test::random_trace(d, 1 + j, rng);
        EXPECT_EQ(boolean_forward(bin, t), classify_trace(m, t)) << name;
      }
    }
  }
}

}  // namespace
}  // namespace strips
