#include <gtest/gtest.h>

#include <array>
#include <map>

#include "rlverif/action_space.hpp"
#include "rlverif/dut_rle.hpp"
#include "rlverif/errors.hpp"

namespace rlv {
namespace {

TEST(KnobSpecTest, RejectsBadDefinitions) {
  EXPECT_THROW(KnobSpec::continuous("x", 1.0, 1.0), ContractViolation);
  EXPECT_THROW(KnobSpec::continuous("x", 0.0, std::numeric_limits<double>::infinity()), ContractViolation);
  EXPECT_THROW(KnobSpec::discrete("x", {}), ContractViolation);
  EXPECT_THROW(KnobSpec::discrete("x", {1, 2, 1}), ContractViolation);
  EXPECT_THROW(KnobSpec::continuous("", 0.0, 1.0), ContractViolation);
  EXPECT_THROW(ActionSpace(std::vector<KnobSpec>{}), ContractViolation);
}

TEST(KnobSpecTest, DiscreteKeepsListedOrder) {
  auto k = KnobSpec::discrete("k", {5, 1, 3});
  EXPECT_EQ(k.values(), (std::vector<double>{5, 1, 3}));
  EXPECT_EQ(k.index_of(3), 2u);
  EXPECT_EQ(k.index_of(4), KnobSpec::npos);
}

TEST(ValidateTest, TypicalRleActionIsValid) {
  EXPECT_TRUE(validate(rle::action_space(), Action{{0.4, 6, 300}}).empty());
}

TEST(ValidateTest, ContinuousOutOfBounds) {
  auto v = validate(rle::action_space(), Action{{1.5, 6, 300}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::out_of_bounds);
  EXPECT_EQ(v[0].knob, 0u);
}

TEST(ValidateTest, DiscreteNotInSet) {
  auto v = validate(rle::action_space(), Action{{0.4, 9, 300}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::not_in_set);
  EXPECT_EQ(v[0].knob, 1u);
}

TEST(ValidateTest, ReportsEveryViolatingKnob) {
  auto v = validate(rle::action_space(), Action{{-0.1, 0, 150}});
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[2].knob, 2u);
}

TEST(ValidateTest, LengthMismatchIsItsOwnKind) {
  auto v = validate(rle::action_space(), Action{{0.4, 6}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::length_mismatch);
  EXPECT_THROW(require_valid(rle::action_space(), Action{{0.4, 6}}), ValidationError);
}

TEST(SampleUniformTest, SingletonKnobIsConstant) {
  ActionSpace space({KnobSpec::discrete("only", {5})});
  Rng rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_uniform(space, rng).values[0], 5.0);
}

TEST(SampleUniformTest, SameSeedSameAction) {
  Rng a(42), b(42);
  EXPECT_EQ(sample_uniform(rle::action_space(), a), sample_uniform(rle::action_space(), b));
}

TEST(SampleUniformTest, DiscreteFrequenciesNearUniform) {
  // p = 1/8 = 0.125 and n = 1e4 give a binomial sd of 0.0033, so [0.10, 0.15]
  // is more than 7 sd wide on each side.
  ActionSpace space({KnobSpec::integer_range("k", 1, 8)});
  Rng rng(11);
  std::map<double, int> hist;
  constexpr int n = 10'000;
  for (int i = 0; i < n; ++i) ++hist[sample_uniform(space, rng).values[0]];
  ASSERT_EQ(hist.size(), 8u);
  for (const auto& [value, count] : hist) {
    const double f = static_cast<double>(count) / n;
    EXPECT_GE(f, 0.10) << value;
    EXPECT_LE(f, 0.15) << value;
  }
}

// Property: samples from randomly generated spaces always validate.
TEST(SampleUniformTest, PropertyOutputAlwaysValid) {
  Rng gen(2024);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<KnobSpec> knobs;
    const int k = std::uniform_int_distribution<int>(1, 5)(gen);
    for (int i = 0; i < k; ++i) {
      const std::string name = "k" + std::to_string(i);
      if (std::bernoulli_distribution(0.5)(gen)) {
        const double lo = std::uniform_real_distribution<double>(-100, 100)(gen);
        const double w = std::uniform_real_distribution<double>(1e-6, 50)(gen);
        knobs.push_back(KnobSpec::continuous(name, lo, lo + w));
      } else {
        std::vector<double> values;
        const int n = std::uniform_int_distribution<int>(1, 12)(gen);
        for (int j = 0; j < n; ++j) values.push_back(j * 1.5 - 3);
        knobs.push_back(KnobSpec::discrete(name, values));
      }
    }
    ActionSpace space(std::move(knobs));
    for (int s = 0; s < 20; ++s) {
      const Action a = sample_uniform(space, gen);
      ASSERT_TRUE(validate(space, a).empty());
      ASSERT_EQ(validate(space, a), validate(space, a));
    }
  }
}

}  // namespace
}  // namespace rlv
