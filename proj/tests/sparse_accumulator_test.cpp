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

#include "ssum/sparse_accumulator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "ssum/errors.hpp"
#include "support/reference.hpp"

namespace ssum {
namespace {

using testing::digits_value;
using testing::DoubleGenerator;
using testing::scaled;

SparseAccumulator sparse_of(std::span<const double> xs, const RadixConfig& cfg = {}) {
  DenseAccumulator acc(cfg);
  for (double x : xs) acc.add_scalar(x);
  return SparseAccumulator::from_dense(acc);
}

std::set<std::int32_t> active(const SparseAccumulator& s) {
  std::set<std::int32_t> out;
  for (const Digit& d : s.digits()) out.insert(d.index);
  return out;
}

void expect_well_formed(const SparseAccumulator& s) {
  const auto ds = s.digits();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ASSERT_LE(std::abs(ds[i].mantissa), s.config().max_digit());
    if (i > 0) {
      ASSERT_GT(ds[i].index, ds[i - 1].index);
    }
  }
}

TEST(SparseFromDoubleTest, Basics) {
  EXPECT_TRUE(SparseAccumulator::from_double(0.0).empty());
  const auto one = SparseAccumulator::from_double(1.0);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.digits()[0], (Digit{21, 8}));
  EXPECT_EQ(digits_value(one.digits(), 51), scaled(1.0));
  const auto narrow = SparseAccumulator::from_double(1.0, {}, 1);
  EXPECT_EQ(narrow.digits()[0], one.digits()[0]);
  EXPECT_FALSE(narrow.truncated_any());
  EXPECT_THROW(SparseAccumulator::from_double(std::numeric_limits<double>::infinity()),
               NonFiniteInput);
  EXPECT_THROW(SparseAccumulator({}, 0), std::invalid_argument);
}

TEST(SparseFromDoubleTest, ExactWhenGammaAtLeastThree) {
  DoubleGenerator gen(1);
  for (int k = 0; k < 2000; ++k) {
    const double x = gen.any_finite();
    const auto s = SparseAccumulator::from_double(x, {}, 3);
    EXPECT_FALSE(s.truncated_any());
    EXPECT_EQ(digits_value(s.digits(), 51), scaled(x));
  }
}

TEST(SparseFromDigitsTest, Validates) {
  const RadixConfig cfg(3);
  EXPECT_THROW(SparseAccumulator::from_digits(cfg, {{2, 1}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(SparseAccumulator::from_digits(cfg, {{1, 1}, {1, 2}}), std::invalid_argument);
  EXPECT_THROW(SparseAccumulator::from_digits(cfg, {{1, 8}}), std::invalid_argument);
  EXPECT_NO_THROW(SparseAccumulator::from_digits(cfg, {{1, -7}, {4, 0}}));
}

TEST(MergeAddTest, EmptyIsIdentity) {
  DoubleGenerator gen(4);
  const auto x = sparse_of(gen.mixed(30));
  const auto sum = merge_add(x, SparseAccumulator{});
  EXPECT_TRUE(std::equal(sum.digits().begin(), sum.digits().end(), x.digits().begin(),
                         x.digits().end()));
  const auto other = merge_add(SparseAccumulator{}, x);
  EXPECT_TRUE(std::equal(other.digits().begin(), other.digits().end(), x.digits().begin(),
                         x.digits().end()));
}

TEST(MergeAddTest, ToyRadixCarryInsertsDigit) {
  const RadixConfig cfg(3);
  const auto a = SparseAccumulator::from_digits(cfg, {{0, 7}});
  const auto sum = merge_add(a, a);
  expect_well_formed(sum);
  EXPECT_EQ(digits_value(sum.digits(), 3), 14);
  EXPECT_EQ(sum.size(), 2u);
  EXPECT_EQ(sum.digits()[1].index, 1);
}

TEST(MergeAddTest, ConfigMismatch) {
  EXPECT_THROW(merge_add(SparseAccumulator(RadixConfig(3)), SparseAccumulator{}), ConfigMismatch);
}

class SparseExactnessTest : public ::testing::TestWithParam<int> {};

TEST_P(SparseExactnessTest, RandomPairsMatchReference) {
  const RadixConfig cfg(GetParam());
  DoubleGenerator gen(GetParam() * 31);
  std::mt19937_64& rng = gen.engine();
  for (int k = 0; k < 10000; ++k) {
    const auto xa = gen.mixed(1 + rng() % 6);
    const auto xb = gen.mixed(rng() % 6);
    const auto a = sparse_of(xa, cfg);
    const auto b = sparse_of(xb, cfg);
    const auto sum = merge_add(a, b);
    expect_well_formed(sum);
    ASSERT_EQ(digits_value(sum.digits(), cfg.width()),
              testing::scaled_sum(xa) + testing::scaled_sum(xb));
    ASSERT_FALSE(sum.truncated_any());
    // Active-index monotonicity.
    const auto got = active(sum);
    for (std::int32_t i : active(a)) ASSERT_TRUE(got.count(i));
    for (std::int32_t i : active(b)) ASSERT_TRUE(got.count(i));
    // Commutativity, digit for digit.
    ASSERT_EQ(merge_add(b, a), sum);
  }
}

INSTANTIATE_TEST_SUITE_P(Widths, SparseExactnessTest, ::testing::Values(3, 51));

TEST(MergeAddTest, AssociativeInValue) {
  DoubleGenerator gen(77);
  for (int k = 0; k < 2000; ++k) {
    const auto a = sparse_of(gen.mixed(5));
    const auto b = sparse_of(gen.mixed(5));
    const auto c = sparse_of(gen.mixed(5));
    auto left = merge_add(merge_add(a, b), c).to_dense();
    auto right = merge_add(a, merge_add(b, c)).to_dense();
    left.renormalize();
    right.renormalize();
    ASSERT_TRUE(std::equal(left.digits().begin(), left.digits().end(), right.digits().begin()));
  }
}

TEST(MergeAddTest, TruncationIsReported) {
  DoubleGenerator gen(12);
  std::mt19937_64& rng = gen.engine();
  for (int k = 0; k < 5000; ++k) {
    const std::size_t gamma = 1 + rng() % 4;
    const auto a = SparseAccumulator::from_dense(sparse_of(gen.mixed(4)).to_dense(), gamma);
    const auto b = SparseAccumulator::from_dense(sparse_of(gen.mixed(4)).to_dense(), gamma);
    const auto full = merge_add(SparseAccumulator::from_digits({}, {a.digits().begin(), a.digits().end()}),
                                SparseAccumulator::from_digits({}, {b.digits().begin(), b.digits().end()}));
    const auto sum = merge_add(a, b);
    ASSERT_LE(sum.size(), gamma);
    expect_well_formed(sum);
    if (!sum.truncated_any()) {
      // Nothing dropped anywhere: the truncated sum is the exact sum.
      ASSERT_EQ(sum.digits().size(), full.digits().size());
      ASSERT_EQ(digits_value(sum.digits(), 51), digits_value(full.digits(), 51));
    } else {
      // Kept digits are the most significant ones of the untruncated merge.
      const auto fd = full.digits();
      const auto sd = sum.digits();
      if (!a.truncated_any() && !b.truncated_any()) {
        ASSERT_TRUE(std::equal(sd.begin(), sd.end(), fd.end() - static_cast<std::ptrdiff_t>(sd.size())));
      }
      ASSERT_TRUE(sum.min_kept_index().has_value());
    }
  }
}

TEST(ToDenseTest, RoundTrips) {
  EXPECT_TRUE(SparseAccumulator{}.to_dense().is_zero());
  const auto one = SparseAccumulator::from_double(1.0).to_dense();
  EXPECT_EQ(one.nonzero_digits().size(), 1u);
  DoubleGenerator gen(9);
  for (int k = 0; k < 2000; ++k) {
    const auto xs = gen.mixed(8);
    const auto s = sparse_of(xs);
    const auto dense = s.to_dense();
    EXPECT_EQ(testing::dense_value(dense.digits(), 51), testing::scaled_sum(xs));
    EXPECT_EQ(SparseAccumulator::from_dense(dense), s);
  }
  const RadixConfig cfg(3);
  EXPECT_THROW(SparseAccumulator::from_digits(cfg, {{cfg.digit_count(), 1}}).to_dense(),
               IndexOutOfRange);
}

TEST(LeastKeptExponentTest, Examples) {
  EXPECT_EQ(SparseAccumulator::from_double(std::numeric_limits<double>::denorm_min())
                .least_kept_exponent(),
            -1074);
  EXPECT_EQ(SparseAccumulator::from_double(1.0).least_kept_exponent(), -3);
  const auto two = SparseAccumulator::from_digits({}, {{5, 1}, {30, -2}});
  EXPECT_EQ(two.least_kept_exponent(), std::min(5 * 51 - 1074, 30 * 51 - 1074));
  EXPECT_THROW(SparseAccumulator{}.least_kept_exponent(), EmptyAccumulator);
}

}  // namespace
}  // namespace ssum
