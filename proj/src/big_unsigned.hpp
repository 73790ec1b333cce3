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
#include <span>
#include <vector>

#include "ssum/dense_accumulator.hpp"
#include "ssum/rounded_sum.hpp"

namespace ssum::detail {

/// Little-endian limb magnitude used for exact ratios.
class BigUnsigned {
 public:
  BigUnsigned() = default;
  explicit BigUnsigned(std::uint64_t v);
  explicit BigUnsigned(std::vector<std::uint64_t> limbs);

  std::span<const std::uint64_t> limbs() const noexcept { return limbs_; }
  bool is_zero() const noexcept { return limbs_.empty(); }
  int bit_length() const noexcept;
  /// log2 of the value from its leading 64 bits; -inf for zero.
  double log2() const noexcept;

  BigUnsigned shifted_left(int bits) const;
  /// *this -= other; requires *this >= other.
  void subtract(const BigUnsigned& other);

  friend int compare(const BigUnsigned& a, const BigUnsigned& b) noexcept;

 private:
  void trim() noexcept;
  std::vector<std::uint64_t> limbs_;
};

/// |value| * 2^1074 of an accumulator, plus its sign.
BigUnsigned magnitude_of(const DenseAccumulator& acc, bool* negative = nullptr);

/// Round-to-nearest-even of (num / den) * 2^scale. den must be nonzero.
RoundedSum round_quotient(const BigUnsigned& num, const BigUnsigned& den, int scale,
                          bool negative);

}  // namespace ssum::detail
