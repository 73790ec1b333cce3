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
#include <optional>
#include <span>
#include <vector>

#include "ssum/dense_accumulator.hpp"
#include "ssum/radix.hpp"

namespace ssum {

/// Sparse superaccumulator: the active digits of a superaccumulator, sorted
/// by strictly increasing index.
///
/// An index is active once it has held a nonzero digit, so a digit may be
/// zero. With a truncation width gamma only the gamma most significant
/// active digits are kept; truncated_any() remembers whether anything was
/// ever dropped, here or in any operand that fed this value.
class SparseAccumulator {
 public:
  explicit SparseAccumulator(const RadixConfig& config = {},
                             std::optional<std::size_t> gamma = std::nullopt);

  static SparseAccumulator from_double(double x, const RadixConfig& config = {},
                                       std::optional<std::size_t> gamma = std::nullopt);
  /// Renormalizes a copy of `dense` and keeps its nonzero digits.
  static SparseAccumulator from_dense(const DenseAccumulator& dense,
                                      std::optional<std::size_t> gamma = std::nullopt);
  /// Adopts a digit list. Throws std::invalid_argument unless indices
  /// strictly increase and every mantissa is regularized.
  static SparseAccumulator from_digits(const RadixConfig& config, std::vector<Digit> digits,
                                       std::optional<std::size_t> gamma = std::nullopt);

  const RadixConfig& config() const noexcept { return config_; }
  std::span<const Digit> digits() const noexcept { return digits_; }
  std::size_t size() const noexcept { return digits_.size(); }
  bool empty() const noexcept { return digits_.empty(); }
  std::optional<std::size_t> gamma() const noexcept { return gamma_; }
  bool truncated_any() const noexcept { return truncated_any_; }
  /// Lowest index retained by the most recent truncation that dropped
  /// digits (from this value or an operand).
  std::optional<std::int32_t> min_kept_index() const noexcept { return min_kept_index_; }

  /// Throws IndexOutOfRange when a digit falls outside the dense range.
  DenseAccumulator to_dense() const;

  /// Bit exponent of the least significant retained digit.
  /// Throws EmptyAccumulator.
  int least_kept_exponent() const;

  friend bool operator==(const SparseAccumulator&, const SparseAccumulator&) = default;

 private:
  friend SparseAccumulator merge_add(const SparseAccumulator&, const SparseAccumulator&);

  void truncate();

  RadixConfig config_;
  std::vector<Digit> digits_;
  std::optional<std::size_t> gamma_;
  bool truncated_any_ = false;
  std::optional<std::int32_t> min_kept_index_;
};

/// Merges the active index lists and applies the carry-free digit rule at
/// every index; a carry out of index i activates i+1 when it was absent.
/// Untruncated operands give an exact, regularized sum. The result
/// truncates to the smaller of the operands' gammas. Throws ConfigMismatch.
SparseAccumulator merge_add(const SparseAccumulator& a, const SparseAccumulator& b);

}  // namespace ssum
