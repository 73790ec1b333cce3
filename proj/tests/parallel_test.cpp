// Copyright 2026 The ssum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ssum/parallel.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ssum/datasets.hpp"
#include "ssum/errors.hpp"
#include "ssum/oracle.hpp"
#include "support/reference.hpp"

namespace ssum {
namespace {

using testing::DoubleGenerator;

std::vector<double> dataset(int kind, std::uint64_t n, int delta, std::uint64_t seed) {
  return generate(DatasetSpec{dataset_kind(kind), n, delta, seed});
}

TEST(ReductionPlanTest, Validates) {
  EXPECT_THROW((ReductionPlan{0, 10}.validate()), std::invalid_argument);
  EXPECT_THROW((ReductionPlan{1, 0}.validate()), std::invalid_argument);
  EXPECT_EQ((ReductionPlan{1, 10}.leaf_count(0)), 0u);
  EXPECT_EQ((ReductionPlan{1, 10}.leaf_count(10)), 1u);
  EXPECT_EQ((ReductionPlan{1, 10}.leaf_count(11)), 2u);
}

TEST(SumTreeTest, CancellationLeavesTiny) {
  const std::vector<double> xs{1.0, -1.0, 0x1p-1074};
  const RoundedSum r = sum_tree(xs, {1, 1});
  EXPECT_EQ(r.value, 0x1p-1074);
  EXPECT_TRUE(r.exact);
}

TEST(SumTreeTest, EmptyAndSpecials) {
  EXPECT_EQ(sum_tree({}).bits(), 0u);
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<double> xs{1.0, inf};
  EXPECT_THROW(sum_tree(xs), NonFiniteInput);
  EXPECT_EQ(sum_tree(xs, {}, NonFinitePolicy::Propagate).value, inf);
  const std::vector<double> both{inf, -inf, 1.0};
  EXPECT_TRUE(std::isnan(sum_tree(both, {}, NonFinitePolicy::Propagate).value));
}

TEST(SumTreeTest, MillionMixedMatchesOracle) {
  const auto xs = dataset(2, 1'000'000, 2000, 5);
  const RoundedSum ref = oracle_sum(xs);
  EXPECT_EQ(testing::reference_sum(xs).bits(), ref.bits());
  for (std::size_t p : {1u, 2u, 8u}) {
    const RoundedSum r = sum_tree(xs, {p, 4096});
    EXPECT_EQ(r.bits(), ref.bits()) << "workers " << p;
    EXPECT_EQ(r.direction, ref.direction);
  }
}

TEST(SumTreeTest, InvariantUnderPlanAndOrder) {
  DoubleGenerator gen(6);
  std::mt19937_64 rng(6);
  for (int k = 0; k < 30; ++k) {
    auto xs = gen.mixed(500 + rng() % 3000);
    const std::uint64_t expect = oracle_sum(xs).bits();
    for (int t = 0; t < 5; ++t) {
      std::shuffle(xs.begin(), xs.end(), rng);
      const ReductionPlan plan{1 + rng() % 8, 1 + rng() % 700};
      ASSERT_EQ(sum_tree(xs, plan).bits(), expect);
    }
  }
}

TEST(StoppingConditionTest, UntruncatedAlwaysStops) {
  const auto y = SparseAccumulator::from_double(1.0);
  EXPECT_TRUE(stopping_condition(y, 1'000'000, StopMode::ExponentGap));
  EXPECT_TRUE(stopping_condition(y, 1'000'000, StopMode::FloatProbe));
  EXPECT_TRUE(stopping_condition(SparseAccumulator{}, 5, StopMode::ExponentGap));
}

TEST(StoppingConditionTest, SmallGapFails) {
  // Keeps the digit of 1.0 (exponent -3) and drops one below it.
  const auto y = SparseAccumulator::from_digits({}, {{20, 5}, {21, 8}}, 1);
  ASSERT_TRUE(y.truncated_any());
  ASSERT_EQ(y.least_kept_exponent(), -3);
  EXPECT_FALSE(stopping_condition(y, 1'000'000, StopMode::ExponentGap));
  EXPECT_FALSE(stopping_condition(y, 1'000'000, StopMode::FloatProbe));
}

TEST(StoppingConditionTest, LargeGapPasses) {
  // 2^600 plus a unit at exponent 507 (digit 31); 2^10 truncation sites.
  const auto y = SparseAccumulator::from_digits(
      {}, {{30, 3}, {31, 1}, {32, std::int64_t{1} << 42}}, 2);
  ASSERT_TRUE(y.truncated_any());
  ASSERT_EQ(y.least_kept_exponent(), 507);
  EXPECT_TRUE(stopping_condition(y, 1 << 10, StopMode::ExponentGap));
  EXPECT_TRUE(stopping_condition(y, 1 << 10, StopMode::FloatProbe));
}

TEST(StoppingConditionTest, ProbeCatchesRoundingBoundary) {
  // y sits exactly on a tie: 1 + 2^-53. Any dropped mass decides it.
  const RadixConfig cfg;
  std::vector<Digit> ds{{0, 1}};
  DenseAccumulator acc;
  acc.add_scalar(1.0);
  acc.add_scalar(0x1p-53);
  for (const Digit& d : acc.nonzero_digits()) ds.push_back(d);
  const auto y = SparseAccumulator::from_digits(cfg, ds, ds.size() - 1);
  ASSERT_TRUE(y.truncated_any());
  EXPECT_FALSE(stopping_condition(y, 2, StopMode::FloatProbe));
  EXPECT_FALSE(stopping_condition(y, 2, StopMode::ExponentGap));
}

TEST(StoppingConditionTest, CancelledValueKeepsGoing) {
  auto y = merge_add(SparseAccumulator::from_digits({}, {{3, 1}, {4, 1}}, 1),
                     SparseAccumulator::from_digits({}, {{4, -1}}, 1));
  // The zero digit stays active, so this is not empty.
  ASSERT_FALSE(y.empty());
  EXPECT_FALSE(stopping_condition(y, 3, StopMode::ExponentGap));
}

// Whenever the condition accepts, the truncated value rounds like the
// exact sum. Checked directly on chains of truncated merges.
TEST(StoppingConditionTest, AcceptanceIsSound) {
  DoubleGenerator gen(44);
  std::mt19937_64& rng = gen.engine();
  int accepted = 0;
  for (int k = 0; k < 20000; ++k) {
    const std::size_t gamma = 1 + rng() % 3;
    const auto xs = gen.mixed(2 + rng() % 30);
    SparseAccumulator y({}, gamma);
    for (double x : xs) y = merge_add(y, SparseAccumulator::from_double(x, {}, gamma));
    const std::uint64_t sites = 2 * xs.size() + 1;
    const std::uint64_t exact = testing::reference_sum(xs).bits();
    for (StopMode mode : {StopMode::ExponentGap, StopMode::FloatProbe}) {
      if (!y.empty() && stopping_condition(y, sites, mode)) {
        ++accepted;
        ASSERT_EQ(round_to_double(y.to_dense()).bits(), exact) << "case " << k;
      }
    }
  }
  EXPECT_GT(accepted, 1000);
}

class TruncatedDriverTest : public ::testing::TestWithParam<int> {};

TEST_P(TruncatedDriverTest, MatchesTreeOnEveryKind) {
  const int kind = GetParam();
  for (int delta : {10, 100, 2000}) {
    for (std::uint64_t seed : {1u, 2u}) {
      const auto xs = dataset(kind, 20'000, delta, seed);
      const RoundedSum tree = sum_tree(xs, {2, 512});
      for (StopMode mode : {StopMode::ExponentGap, StopMode::FloatProbe}) {
        const TruncatedRunReport rep = sum_truncated(xs, {2, 512}, 2, mode);
        EXPECT_EQ(rep.result.bits(), tree.bits());
        EXPECT_GE(rep.iterations, 1);
        EXPECT_LE(rep.iterations, 5);
        if (kind == 4) {
          EXPECT_EQ(rep.result.bits(), 0u);
          EXPECT_EQ(rep.stopped_by, StopReason::Untruncated);
        }
        if (kind == 1) {
          EXPECT_LE(rep.iterations, 2);
        }
        if (rep.stopped_by == StopReason::StoppingCondition) {
          std::uint64_t r = 2;
          for (int i = 1; i < rep.iterations; ++i) r *= r;
          EXPECT_EQ(rep.final_r, r);
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Kinds, TruncatedDriverTest, ::testing::Values(1, 2, 3, 4));

TEST(TruncatedDriverTest, SingleValue) {
  const double xs[] = {0x1.23456789abcdep-300};
  const auto rep = sum_truncated(xs);
  EXPECT_EQ(rep.iterations, 1);
  EXPECT_EQ(rep.result.value, xs[0]);
  EXPECT_THROW(sum_truncated(xs, {}, 1), std::invalid_argument);
}

TEST(TruncatedDriverTest, IterationBound) {
  // log2 log2 44 rounds up to 3; plus 2.
  DoubleGenerator gen(8);
  for (int k = 0; k < 50; ++k) {
    const auto xs = gen.mixed(3000);
    const auto rep = sum_truncated(xs, {1, 64});
    EXPECT_LE(rep.iterations, 5);
    EXPECT_EQ(rep.result.bits(), oracle_sum(xs).bits());
  }
}

TEST(ConditionNumberTest, Examples) {
  const std::vector<double> pos{1.0, 2.5, 0x1p-1000, 1e300};
  const ConditionReport one = condition_number(pos);
  EXPECT_EQ(one.c, 1.0);
  EXPECT_EQ(one.log2_c, 0.0);
  EXPECT_FALSE(one.infinite);
  const std::vector<double> zero{1.0, -1.0};
  EXPECT_TRUE(condition_number(zero).infinite);
  EXPECT_TRUE(std::isinf(condition_number(zero).c));
  EXPECT_TRUE(condition_number({}).infinite);
  const std::vector<double> bad{std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(condition_number(bad), NonFiniteInput);
}

TEST(ConditionNumberTest, MatchesRationalReference) {
  for (int delta : {10, 100, 1000, 2000}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto xs = dataset(3, 2000, delta, seed);
      mpz_class num = 0;
      for (double x : xs) num += testing::scaled(std::fabs(x));
      const mpz_class den = abs(testing::scaled_sum(xs));
      ASSERT_NE(den, 0);
      const double expect = testing::round_rational(mpq_class(num, den));
      const ConditionReport got = condition_number(xs);
      EXPECT_LE(testing::ulp_distance(got.c, expect), 1u) << delta << " " << seed;
      EXPECT_NEAR(got.log2_c, std::log2(expect), 1e-9 * std::max(1.0, std::log2(expect)));
    }
  }
}

TEST(ConditionNumberTest, PositiveDatasetsAreWellConditioned) {
  for (int delta : {0, 10, 2000}) {
    EXPECT_EQ(condition_number(dataset(1, 5000, delta, 9)).c, 1.0);
  }
}

}  // namespace
}  // namespace ssum
