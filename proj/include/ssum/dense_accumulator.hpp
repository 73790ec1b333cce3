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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ssum/radix.hpp"
#include "ssum/rounded_sum.hpp"

namespace ssum {

/// Upper bound on the digits one binary64 splits into, over every
/// admissible width (53 mantissa bits plus a shift of at most width-1).
inline constexpr std::size_t kMaxDecomposedDigits = 28;

/// Splits a finite double into regularized digits whose exact sum is x.
/// Digits share the sign of x and come out in increasing index order;
/// +-0 yields an empty list. Throws NonFiniteInput for NaN and infinities.
std::vector<Digit> decompose(double x, const RadixConfig& config = {});

namespace detail {
/// Allocation-free form of decompose(); returns the digit count.
std::size_t decompose_into(double x, const RadixConfig& config,
                           std::span<Digit, kMaxDecomposedDigits> out);
}  // namespace detail

/// Fixed-range (alpha,beta)-regularized superaccumulator covering every
/// binary64 bit plus carry headroom.
///
/// Scalar additions land in "raw" digits that may exceed the regularized
/// range. A raw-add counter bounds the growth: after K raw adds every digit
/// is at most (K+1)(R-1) in magnitude, and the accumulator renormalizes
/// itself before K exceeds RadixConfig::max_raw_adds(), so no digit ever
/// reaches 2^62. The represented value sum_i Y_i R^i 2^-1074 is exact in
/// every state.
class DenseAccumulator {
 public:
  explicit DenseAccumulator(const RadixConfig& config = {});

  const RadixConfig& config() const noexcept { return config_; }
  std::span<const std::int64_t> digits() const noexcept { return digits_; }
  std::int64_t raw_adds() const noexcept { return raw_adds_; }

  void add_scalar(double x);
  /// Raw-adds regularized digits with pairwise distinct indices. Counts as
  /// one raw add.
  void add_digits(std::span<const Digit> digits);

  /// Signed-carry propagation into the balanced non-overlapping form: every
  /// digit ends in [-R/2, R/2-1]. Value preserving and idempotent. Throws
  /// CapacityOverflow if a carry leaves the top digit.
  void renormalize();

  /// Renormalizes, then rewrites the digits so that all nonzero digits share
  /// the sign of the total, with magnitudes in [0, R-1].
  void canonicalize();

  /// True when every digit lies in [-(R-1), R-1].
  bool is_regularized() const noexcept;
  bool is_zero() const noexcept;

  /// Nonzero digits in increasing index order.
  std::vector<Digit> nonzero_digits() const;

  /// Builds a regularized accumulator from digits with distinct indices.
  /// Throws IndexOutOfRange for an index outside [0, digit_count).
  static DenseAccumulator from_digits(const RadixConfig& config,
                                      std::span<const Digit> digits);

  friend bool operator==(const DenseAccumulator&, const DenseAccumulator&) = default;

 private:
  friend DenseAccumulator add_accumulators(const DenseAccumulator&,
                                           const DenseAccumulator&);

  RadixConfig config_;
  std::vector<std::int64_t> digits_;
  std::int64_t raw_adds_ = 0;
};

/// Carry-free digit-parallel addition of two regularized accumulators.
///
/// P_i = Y_i + Z_i; the signed carry C_{i+1} is 1 when P_i >= R-1, -1 when
/// P_i <= -(R-1), else 0; W_i = P_i - C_{i+1} R and S_i = W_i + C_i. Every
/// S_i depends only on P_i and P_{i-1} and lands in [-(R-1), R-1].
/// Throws ConfigMismatch, NotRegularized, or CapacityOverflow.
DenseAccumulator add_accumulators(const DenseAccumulator& a, const DenseAccumulator& b);

/// Round-to-nearest-even of the represented value. Accepts any state.
RoundedSum round_to_double(const DenseAccumulator& acc);

}  // namespace ssum
