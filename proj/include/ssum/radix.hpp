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

namespace ssum {

/// Bit position of the least significant binary64 bit (2^-1074). Digit 0
/// starts here.
inline constexpr int kMinBit = -1074;

/// Bits a dense accumulator must cover: the binary64 span [-1074, 1024)
/// plus 64 bits of carry headroom for up to 2^63 summands.
inline constexpr int kSpanBits = 2098 + 64;

/// Radix parameters of a signed-digit superaccumulator.
///
/// Digit i carries weight R^i * 2^kMinBit with R = 2^width. A regularized
/// digit lies in [-(R-1), R-1]; the widest admissible width leaves room in
/// a 64-bit word for at least one raw addition between renormalizations.
class RadixConfig {
 public:
  static constexpr int kDefaultWidth = 51;
  static constexpr int kMinWidth = 2;
  static constexpr int kMaxWidth = 60;

  constexpr RadixConfig() = default;
  /// Throws std::invalid_argument when width is outside [2, 60].
  explicit RadixConfig(int width);

  constexpr int width() const noexcept { return width_; }
  constexpr std::int64_t radix() const noexcept { return std::int64_t{1} << width_; }
  /// alpha = beta = R - 1.
  constexpr std::int64_t max_digit() const noexcept { return radix() - 1; }
  constexpr int digit_count() const noexcept {
    return (kSpanBits + width_ - 1) / width_ + 1;
  }
  /// Raw scalar additions a dense accumulator may absorb before it has to
  /// renormalize: 2^(62-w) - 2.
  constexpr std::int64_t max_raw_adds() const noexcept {
    return (std::int64_t{1} << (62 - width_)) - 2;
  }
  /// Bit exponent of the least significant bit of digit `index`.
  constexpr int exponent_of(int index) const noexcept {
    return index * width_ + kMinBit;
  }

  friend constexpr bool operator==(const RadixConfig&, const RadixConfig&) = default;

 private:
  int width_ = kDefaultWidth;
};

/// One superaccumulator component: mantissa * R^index * 2^kMinBit.
struct Digit {
  std::int32_t index = 0;
  std::int64_t mantissa = 0;

  friend constexpr bool operator==(const Digit&, const Digit&) = default;
};

}  // namespace ssum
