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

#pragma once

#include <cstdint>
#include <vector>

namespace ssum {

enum class DatasetKind {
  Positive = 1,
  Mixed = 2,
  /// Mixed values with their correctly rounded mean subtracted.
  AndersonIll = 3,
  /// Values paired with their exact negations; the exact sum is zero.
  SumZero = 4,
};

struct DatasetSpec {
  DatasetKind kind = DatasetKind::Positive;
  std::uint64_t n = 1;
  /// Width of the exponent range, at most 2046. Zero is treated as one.
  int delta = 100;
  std::uint64_t seed = 0;

  /// Throws InvalidSpec.
  void validate() const;
};

/// Throws InvalidSpec for an id outside 1..4.
DatasetKind dataset_kind(int id);

/// Deterministic for a given spec.
///
/// Base values carry 52 random mantissa bits and an exponent drawn
/// uniformly from [0, delta). When delta exceeds 960 the range is shifted
/// down to end at 960, but never below -1074; sums of up to 2^51 values
/// stay finite. Exponents under -1022 yield subnormals that keep the
/// leading bits of the mantissa. Randomness comes from
/// std::mt19937_64 raw output with unbiased multiply-shift bounding, which
/// is the same on every platform.
std::vector<double> generate(const DatasetSpec& spec);

}  // namespace ssum
