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

#include "ssum/rounded_sum.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ssum/errors.hpp"

namespace ssum {

std::uint64_t RoundedSum::bits() const noexcept { return std::bit_cast<std::uint64_t>(value); }

std::string_view to_string(Rounding r) noexcept {
  switch (r) {
    case Rounding::Exact:
      return "exact";
    case Rounding::RoundedDown:
      return "rounded_down";
    case Rounding::RoundedUp:
      return "rounded_up";
  }
  return "unknown";
}

std::string hex_bits(double value) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(value)));
  return buf;
}

std::string shortest_decimal(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

bool SpecialValues::admit(double x, NonFinitePolicy policy) {
  if (std::isfinite(x)) return true;
  if (policy == NonFinitePolicy::Reject) throw NonFiniteInput(x);
  if (std::isnan(x)) {
    nan_ = true;
  } else if (x > 0) {
    pos_inf_ = true;
  } else {
    neg_inf_ = true;
  }
  return false;
}

RoundedSum SpecialValues::result() const {
  RoundedSum r;
  if (nan_ || (pos_inf_ && neg_inf_)) {
    r.value = std::numeric_limits<double>::quiet_NaN();
  } else if (pos_inf_) {
    r.value = std::numeric_limits<double>::infinity();
  } else if (neg_inf_) {
    r.value = -std::numeric_limits<double>::infinity();
  }
  return r;
}

void SpecialValues::merge(const SpecialValues& other) noexcept {
  nan_ = nan_ || other.nan_;
  pos_inf_ = pos_inf_ || other.pos_inf_;
  neg_inf_ = neg_inf_ || other.neg_inf_;
}

std::optional<RoundedSum> screen_nonfinite(std::span<const double> xs,
                                           NonFinitePolicy policy) {
  SpecialValues specials;
  for (double x : xs) specials.admit(x, policy);
  if (specials.any()) return specials.result();
  return std::nullopt;
}

}  // namespace ssum
