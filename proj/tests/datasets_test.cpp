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

#include "ssum/datasets.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <vector>

#include "ssum/errors.hpp"
#include "ssum/parallel.hpp"
#include "support/reference.hpp"

namespace ssum {
namespace {

int exponent_of(double x) { return std::ilogb(x); }

TEST(DatasetSpecTest, Validates) {
  EXPECT_THROW(generate(DatasetSpec{DatasetKind::Positive, 0, 10, 1}), InvalidSpec);
  EXPECT_THROW(generate(DatasetSpec{DatasetKind::Positive, 5, -1, 1}), InvalidSpec);
  EXPECT_THROW(generate(DatasetSpec{DatasetKind::Positive, 5, 2047, 1}), InvalidSpec);
  EXPECT_THROW(generate(DatasetSpec{static_cast<DatasetKind>(5), 5, 10, 1}), InvalidSpec);
  EXPECT_THROW(dataset_kind(0), InvalidSpec);
  EXPECT_EQ(dataset_kind(3), DatasetKind::AndersonIll);
  EXPECT_EQ(generate(DatasetSpec{DatasetKind::Positive, 5, 2046, 1}).size(), 5u);
}

TEST(DatasetTest, Deterministic) {
  for (int kind = 1; kind <= 4; ++kind) {
    const DatasetSpec spec{dataset_kind(kind), 1001, 700, 42};
    const auto a = generate(spec);
    const auto b = generate(spec);
    ASSERT_EQ(a.size(), 1001u);
    EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)), 0);
    DatasetSpec other = spec;
    other.seed = 43;
    EXPECT_NE(generate(other), a);
  }
}

TEST(DatasetTest, PinnedValues) {
  // Guards the generator against accidental changes.
  const std::vector<std::vector<std::string>> expect{
      {"0x44af30567547a34c", "0x40ae4546c04d9ff7", "0x40d0e1a95d201fdd"},
      {"0x44af30567547a34c", "0x458242a5f87d0a7d", "0x452e694f6378f1c4"},
      {"0xc568f9c244745ab4", "0x457807714c0c3d63", "0xc567152053a42012"},
      {"0x44af30567547a34c", "0xc4af30567547a34c", "0x0000000000000000"},
  };
  for (int kind = 1; kind <= 4; ++kind) {
    const auto xs = generate(DatasetSpec{dataset_kind(kind), 3, 100, 7});
    ASSERT_EQ(xs.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(hex_bits(xs[i]), expect[kind - 1][i]);
  }
}

TEST(DatasetTest, PositiveEnvelope) {
  for (int delta : {1, 10, 100, 960}) {
    const auto xs = generate(DatasetSpec{DatasetKind::Positive, 5000, delta, 3});
    int lo = 10000;
    int hi = -10000;
    for (double x : xs) {
      ASSERT_TRUE(std::isfinite(x));
      ASSERT_GE(x, 1.0);
      lo = std::min(lo, exponent_of(x));
      hi = std::max(hi, exponent_of(x));
    }
    EXPECT_EQ(lo, 0);
    EXPECT_EQ(hi, delta - 1);
  }
}

TEST(DatasetTest, WideDeltaShiftsDown) {
  const std::pair<int, std::pair<int, int>> cases[] = {
      {1000, {-40, 959}}, {2000, {-1040, 959}}, {2046, {-1074, 971}}};
  for (const auto& [delta, range] : cases) {
    const auto xs = generate(DatasetSpec{DatasetKind::Positive, 200'000, delta, 3});
    int lo = 10000;
    int hi = -10000;
    for (double x : xs) {
      ASSERT_TRUE(std::isfinite(x));
      ASSERT_GT(x, 0.0);
      lo = std::min(lo, exponent_of(x));
      hi = std::max(hi, exponent_of(x));
    }
    EXPECT_EQ(lo, range.first) << delta;
    EXPECT_EQ(hi, range.second) << delta;
  }
}

TEST(DatasetTest, DeltaZeroHasOneExponent) {
  const auto xs = generate(DatasetSpec{DatasetKind::Positive, 1000, 0, 3});
  for (double x : xs) ASSERT_EQ(exponent_of(x), 0);
}

TEST(DatasetTest, MixedHasBothSigns) {
  const auto xs = generate(DatasetSpec{DatasetKind::Mixed, 1000, 50, 3});
  const auto neg = std::count_if(xs.begin(), xs.end(), [](double x) { return x < 0; });
  EXPECT_GT(neg, 400);
  EXPECT_LT(neg, 600);
}

TEST(DatasetTest, SumZeroIsExactlyZero) {
  for (std::uint64_t n : {1u, 2u, 999u, 1000u}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto xs = generate(DatasetSpec{DatasetKind::SumZero, n, 2000, seed});
      ASSERT_EQ(xs.size(), n);
      EXPECT_EQ(testing::scaled_sum(xs), 0);
      if (n % 2 == 1) {
        EXPECT_EQ(std::bit_cast<std::uint64_t>(xs.back()), 0u);
      }
    }
  }
}

TEST(DatasetTest, IllConditionedSubtractsRoundedMean) {
  const DatasetSpec spec{DatasetKind::AndersonIll, 3000, 200, 8};
  const auto xs = generate(spec);
  DatasetSpec base = spec;
  base.kind = DatasetKind::Mixed;
  const auto raw = generate(base);
  mpq_class mean(testing::scaled_sum(raw), 1);
  mean /= mpz_class(static_cast<unsigned long>(raw.size()));
  mpz_class unit = 1;
  unit <<= 1074;
  const double mu = testing::round_rational(mean / unit);
  for (std::size_t i = 0; i < xs.size(); ++i) ASSERT_EQ(xs[i], raw[i] - mu);
}

// Subtracting the rounded mean leaves a sum made of the per-element
// rounding errors, so the data is badly conditioned at every delta. The
// level does not climb with delta: the errors scale with the largest
// elements, as does the sum of magnitudes.
TEST(DatasetTest, IllConditionedAtEveryDelta) {
  for (int delta : {10, 100, 1000}) {
    double total = 0.0;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      total += condition_number(generate(DatasetSpec{DatasetKind::AndersonIll, 5000, delta, seed}))
                   .log2_c;
    }
    const double mean = total / 3;
    ::testing::Test::RecordProperty("log2_c_delta_" + std::to_string(delta),
                                    std::to_string(mean));
    EXPECT_GT(mean, 40.0) << "delta " << delta;
    const auto mixed = generate(DatasetSpec{DatasetKind::Mixed, 5000, delta, 1});
    EXPECT_GT(mean, condition_number(mixed).log2_c + 20) << "delta " << delta;
  }
}

TEST(DatasetTest, PositiveHasUnitConditionNumber) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    EXPECT_EQ(condition_number(generate(DatasetSpec{DatasetKind::Positive, 10000, 2000, seed})).c,
              1.0);
  }
}

}  // namespace
}  // namespace ssum
