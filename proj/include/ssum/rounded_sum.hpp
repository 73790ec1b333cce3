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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace ssum {

enum class Rounding { Exact, RoundedDown, RoundedUp };

/// msd_exponent of an exact zero.
inline constexpr int kZeroExponent = std::numeric_limits<int>::min();

/// Final binary64 of a summation. `value` is the round-to-nearest-even image
/// of the exact sum; an exact zero is always +0.0.
struct RoundedSum {
  double value = 0.0;
  bool exact = true;
  Rounding direction = Rounding::Exact;
  /// Exponent of the most significant set bit of the exact sum.
  int msd_exponent = kZeroExponent;

  std::uint64_t bits() const noexcept;
};

std::string_view to_string(Rounding r) noexcept;

/// "0x" followed by 16 lowercase hex digits of the bit pattern.
std::string hex_bits(double value);

/// Shortest decimal that round-trips to `value`.
std::string shortest_decimal(double value);

enum class NonFinitePolicy {
  /// Throw NonFiniteInput on the first NaN or infinity.
  Reject,
  /// Skip the exact sum and return the IEEE result of the specials.
  Propagate,
};

/// Records the NaNs and infinities an engine skipped under
/// NonFinitePolicy::Propagate.
class SpecialValues {
 public:
  /// Returns true when x is finite and should be accumulated. Throws
  /// NonFiniteInput for a special value under Reject.
  bool admit(double x, NonFinitePolicy policy);

  bool any() const noexcept { return nan_ || pos_inf_ || neg_inf_; }
  /// NaN if a NaN was seen or both infinities were; otherwise the infinity.
  RoundedSum result() const;
  void merge(const SpecialValues& other) noexcept;

 private:
  bool nan_ = false;
  bool pos_inf_ = false;
  bool neg_inf_ = false;
};

/// Screens a whole input up front. Returns the special result when the
/// policy is Propagate and a special value is present.
std::optional<RoundedSum> screen_nonfinite(std::span<const double> xs,
                                           NonFinitePolicy policy);

}  // namespace ssum
