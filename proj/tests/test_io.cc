#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "strips/domains.h"
#include "strips/io.h"
#include "test_util.h"

namespace strips {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("strips_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST(DomainJson, RoundTripIsByteIdentical) {
  for (const auto& name : benchmark_domain_names()) {
    const Domain d = builtin_domain(name);
    const std::string text = domain_to_json(d);
    const Domain back = domain_from_json(text);
    EXPECT_EQ(back, d) << name;
    EXPECT_EQ(domain_to_json(back), text) << name;
  }
}

TEST(DomainJson, SortedKeysAndListOrder) {
  const std::string text = domain_to_json(builtin_simple());
  EXPECT_LT(text.find("\"actions\""), text.find("\"atoms\""));
  EXPECT_LT(text.find("\"atoms\""), text.find("\"name\": \"simple\""));
  EXPECT_LT(text.find("\"add\""), text.find("\"del\""));
}

TEST(DomainJson, Errors) {
  EXPECT_THROW(domain_from_json("{"), IoError);
  EXPECT_THROW(domain_from_json("[]"), IoError);
  EXPECT_THROW(domain_from_json(R"({"name": "x", "atoms": ["p"]})"), IoError);
  EXPECT_THROW(
      domain_from_json(
          R"({"name": "x", "atoms": ["p"], "actions": [{"name": "a", "pre": ["q"], "add": [], "del": []}]})"),
      DomainError);
}

TEST_F(TempDir, DomainFileRoundTrip) {
  const Domain d = builtin_domain("ferry-2c");
  const fs::path path = dir_ / "ferry.json";
  save_domain(d, path);
  const std::string first = read_text_file(path);
  save_domain(load_domain(path), path);
  EXPECT_EQ(read_text_file(path), first);
  EXPECT_EQ(resolve_domain(path.string()), d);
  EXPECT_EQ(resolve_domain("simple"), builtin_simple());
  EXPECT_THROW(resolve_domain((dir_ / "missing.json").string()), std::invalid_argument);
}

TEST(DatasetFormat, RoundTrip) {
  const Domain d = builtin_domain("blocksworld-2b");
  DatasetConfig config;
  config.count = 40;
  config.max_length = 20;
  config.seed = 12;
  const Dataset data = build_dataset(d, config);
  std::ostringstream out;
  write_dataset(out, data, d);
  std::istringstream in(out.str());
  const DatasetFile file = read_dataset_file(in);
  EXPECT_EQ(file.header.at("domain"), "blocksworld-2b");
  EXPECT_EQ(file.header.at("seed"), "12");
  const Dataset back = resolve_dataset(file, d);
  EXPECT_EQ(back.traces, data.traces);
  EXPECT_EQ(back.config.max_length, 20u);
  EXPECT_EQ(back.domain_name, "blocksworld-2b");
}

TEST(DatasetFormat, Errors) {
  std::istringstream bad_label("2\ta b\n");
  EXPECT_THROW(read_dataset_file(bad_label), IoError);
  std::istringstream empty("0\n");
  EXPECT_THROW(read_dataset_file(empty), IoError);
  std::istringstream unknown("0\ta z\n");
  EXPECT_THROW(resolve_dataset(read_dataset_file(unknown), builtin_simple()), DomainError);
}

TEST(ThetaJson, RoundTripFullPrecision) {
  const Domain d = builtin_domain("ferry-1c");
  Rng rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Theta theta(d.atom_count(), d.action_count());
  for (double& x : theta.values()) x = unit(rng);
  const ThetaFile back = theta_from_json(theta_to_json(theta, d.atoms, d.action_names()));
  EXPECT_EQ(back.theta, theta);
  EXPECT_EQ(back.atoms, d.atoms);
  EXPECT_EQ(back.actions, d.action_names());
  EXPECT_THROW(theta_from_json(R"({"atoms": ["p"], "actions": ["a"], "values": [[[0, 1]]]})"),
               IoError);
}

TEST(LogRecord, JsonLine) {
  EXPECT_EQ(log_record_to_json({1000, 0.5, 0.75}),
            R"({"loss":0.5,"step":1000,"train_accuracy":0.75})");
}

TEST(Traces, ParseAndFormat) {
  const Domain simple = builtin_simple();
  EXPECT_EQ(parse_trace(simple, "(a,c,c,b)"), test::ids(simple, "a c c b"));
  EXPECT_EQ(parse_trace(simple, " a  c, b "), test::ids(simple, "a c b"));
  EXPECT_THROW(parse_trace(simple, "a x"), DomainError);

  const Domain bw = builtin_domain("blocksworld-2b");
  const Trace t = parse_trace(bw, "pickup(b1), stack(b1,b2)");
  EXPECT_EQ(format_trace(bw, t), "pickup(b1) stack(b1,b2)");
  EXPECT_EQ(parse_trace(bw, "(pickup(b1),stack(b1,b2))"), t);
}

}  // namespace
}  // namespace strips
