#include <gtest/gtest.h>

#include <set>

#include "strips/datagen.h"
#include "strips/domains.h"
#include "test_util.h"

namespace strips {
namespace {

using test::ids;

TEST(SamplePositive, SingletonsAndLabels) {
  const Domain d = builtin_simple();
  Rng rng(1);
  std::set<ActionId> seen;
  for (int k = 0; k < 60; ++k) {
    const Trace t = sample_positive(d, 1, rng);
    ASSERT_EQ(t.size(), 1u);
    seen.insert(t[0]);
  }
  EXPECT_EQ(seen.size(), 3u);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(classify_trace(d, sample_positive(d, 6, rng)).label, 0);
  const Domain bw = builtin_domain("blocksworld-2b");
  EXPECT_EQ(classify_trace(bw, sample_positive(bw, 20, rng)).label, 0);
  EXPECT_THROW(sample_positive(d, 0, rng), std::invalid_argument);
}

TEST(SamplePositive, InitialStateRestrictsToExecutable) {
  const Domain d = builtin_domain("ferry-1c");
  std::vector<AtomId> init;
  for (const char* name : {"at(c1,p1)", "at-ferry(p1)", "empty-ferry"}) {
    init.push_back(*d.find_atom(name));
  }
  SamplerOptions options;
  options.initial_state = State::from_atoms(d.atom_count(), init);
  Rng rng(3);
  for (int k = 0; k < 30; ++k) {
    const Trace t = sample_positive(d, 15, rng, options);
    State s = *options.initial_state;
    for (ActionId m : t) {
      ASSERT_TRUE(applicable(d, s, m));
      s = apply(d, s, m);
    }
  }
}

TEST(SampleNegative, SingleFinalViolation) {
  Rng rng(2);
  for (const auto& name : benchmark_domain_names()) {
    const Domain d = builtin_domain(name);
    for (int k = 0; k < 50; ++k) {
      const std::size_t n = 2 + k % 20;
      const Trace t = sample_negative(d, n, rng);
      ASSERT_EQ(t.size(), n);
      const TraceVerdict v = classify_trace(d, t);
      EXPECT_EQ(v.label, 1);
      for (std::size_t i = 0; i + 1 < n; ++i) EXPECT_EQ(v.flags[i], 0);
      EXPECT_EQ(v.flags.back(), 1);
    }
  }
}

TEST(SampleNegative, SimpleAfterA) {
  // possible_next(a) = {c}, so any length-2 negative starting with a ends in
  // a or b.
  const Domain d = builtin_simple();
  Rng rng(8);
  for (int k = 0; k < 100; ++k) {
    const Trace t = sample_negative(d, 2, rng);
    EXPECT_NE(t[0], *d.find_action("c"));  // nothing is inapplicable after c
    if (t[0] == *d.find_action("a")) {
      EXPECT_NE(t[1], *d.find_action("c"));
    }
  }
  EXPECT_THROW(sample_negative(d, 1, rng), std::invalid_argument);
}

TEST(SampleNegative, ExhaustsRetriesWhenNothingIsInapplicable) {
  const std::vector<NamedAction> actions{{"x", {}, {"p"}, {}}};
  const Domain d = make_domain("free", {"p"}, actions);
  Rng rng(0);
  SamplerOptions options;
  options.max_retries = 20;
  EXPECT_THROW(sample_negative(d, 3, rng, options), DatagenError);
}

TEST(BuildDataset, ClassRatioUniquenessAndDeterminism) {
  const Domain d = builtin_simple();
  DatasetConfig config;
  config.count = 500;
  config.max_length = 10;
  config.seed = 1;
  const Dataset a = build_dataset(d, config);
  EXPECT_EQ(a.size(), 500u);
  EXPECT_EQ(a.negatives(), 400u);
  EXPECT_EQ(a.positives(), 100u);
  std::set<Trace> unique;
  for (const auto& item : a.traces) {
    unique.insert(item.trace);
    EXPECT_LE(item.trace.size(), 10u);
    const TraceVerdict v = classify_trace(d, item.trace);
    EXPECT_EQ(v.label, item.label);
    if (item.label) {
      EXPECT_GE(item.trace.size(), 2u);
      EXPECT_EQ(v.flags.back(), 1);
      EXPECT_EQ(std::count(v.flags.begin(), v.flags.end(), 1), 1);
    }
  }
  EXPECT_EQ(unique.size(), 500u);
  EXPECT_EQ(build_dataset(d, config).traces, a.traces);
  config.seed = 2;
  EXPECT_NE(build_dataset(d, config).traces, a.traces);
}

TEST(BuildDataset, TooManyUniqueTraces) {
  DatasetConfig config;
  config.count = 2000;
  EXPECT_THROW(build_dataset(builtin_simple(), config), DatagenError);
  config.unique = false;
  EXPECT_EQ(build_dataset(builtin_simple(), config).size(), 2000u);
}

TEST(BuildDataset, EdgeCases) {
  DatasetConfig config;
  config.count = 0;
  EXPECT_EQ(build_dataset(builtin_simple(), config).size(), 0u);
  config.count = 50;
  config.max_length = 20;
  EXPECT_EQ(build_dataset(builtin_domain("ferry-1c"), config).size(), 50u);
  config.max_length = 1;
  EXPECT_THROW(build_dataset(builtin_simple(), config), std::invalid_argument);
  config.max_length = 10;
  config.negative_fraction = 1.5;
  EXPECT_THROW(build_dataset(builtin_simple(), config), std::invalid_argument);
}

TEST(EnumerateTraces, SimpleCounts) {
  const Domain d = builtin_simple();
  const auto one = enumerate_traces(d, 1);
  EXPECT_EQ(one.size(), 3u);
  for (const auto& item : one) EXPECT_EQ(item.label, 0);

  const auto two = enumerate_traces(d, 2);
  EXPECT_EQ(two.size(), 12u);
  std::vector<Trace> negatives;
  for (const auto& item : two) {
    if (item.label) negatives.push_back(item.trace);
  }
  EXPECT_EQ(negatives, (std::vector<Trace>{ids(d, "a a"), ids(d, "a b"), ids(d, "b a"),
                                           ids(d, "b b")}));
  EXPECT_EQ(enumerate_traces(d, 4).size(), 120u);
}

TEST(EnumerateTraces, UniqueTraceSupplyOfSimple) {
  // Brute-force counts that bound how many unique traces build_dataset can
  // draw from simple at length <= 10.
  const Domain d = builtin_simple();
  std::vector<std::size_t> positives(11, 0);
  std::vector<std::size_t> final_only(11, 0);
  enumerate_traces(d, 10, [&](const Trace& t, std::uint8_t label) {
    if (!label) {
      ++positives[t.size()];
      return;
    }
    const auto flags = classify_trace(d, t).flags;
    if (std::count(flags.begin(), flags.end(), 1) == 1 && flags.back()) ++final_only[t.size()];
  });
  EXPECT_EQ(positives, (std::vector<std::size_t>{0, 3, 5, 9, 15, 25, 41, 67, 109, 177, 287}));
  EXPECT_EQ(final_only, (std::vector<std::size_t>{0, 0, 4, 6, 12, 20, 34, 56, 92, 150, 244}));
}

TEST(EnumerateTraces, Guard) {
  EXPECT_THROW(enumerate_traces(builtin_domain("blocksworld-3b"), 10), DatagenError);
}

}  // namespace
}  // namespace strips
