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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ssum/rounded_sum.hpp"

namespace ssum {

/// Exact fixed-point image of a sum: the integer sum_i x_i * 2^1074 held in
/// two's complement over enough 64-bit limbs for 2^63 binary64 summands.
///
/// Shares no code with the digit-based accumulators; it is the reference
/// every engine is checked against.
class ExactFixedPoint {
 public:
  static constexpr std::size_t kLimbs = 36;

  /// Throws NonFiniteInput.
  void add(double x);
  void add(const ExactFixedPoint& other) noexcept;

  bool is_zero() const noexcept;
  bool is_negative() const noexcept { return (limbs_.back() >> 63) != 0; }
  /// |value| * 2^1074 as little-endian limbs without leading zero limbs.
  std::vector<std::uint64_t> magnitude() const;

  RoundedSum round() const;

  friend bool operator==(const ExactFixedPoint&, const ExactFixedPoint&) = default;

 private:
  std::array<std::uint64_t, kLimbs> limbs_{};
};

/// Correctly rounded sum through ExactFixedPoint. Throws NonFiniteInput.
RoundedSum oracle_sum(std::span<const double> xs);

/// Left-to-right IEEE addition.
double naive_sum(std::span<const double> xs) noexcept;

/// Running sum plus a running total of AddTwo error terms.
double compensated_sum(std::span<const double> xs) noexcept;

/// Round-to-nearest-even of M * 2^scale where M is a little-endian limb
/// magnitude and `sticky` marks nonzero bits below M's lsb. Handles
/// subnormal results and overflow to infinity.
RoundedSum round_scaled(std::span<const std::uint64_t> magnitude, int scale, bool negative,
                        bool sticky = false);

}  // namespace ssum
