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

#include "ssum/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ssum/errors.hpp"

namespace ssum {
namespace {

struct Unpacked {
  std::uint64_t mantissa = 0;
  int position = 0;  // lsb position counted from 2^-1074
  bool negative = false;
};

Unpacked unpack(double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const auto biased = static_cast<int>((bits >> 52) & 0x7ff);
  if (biased == 0x7ff) throw NonFiniteInput(x);
  Unpacked u;
  u.mantissa = bits & ((std::uint64_t{1} << 52) - 1);
  u.negative = (bits >> 63) != 0;
  if (biased != 0) {
    u.mantissa |= std::uint64_t{1} << 52;
    u.position = biased - 1;
  }
  return u;
}

int bit_length(std::span<const std::uint64_t> m) {
  for (std::size_t i = m.size(); i-- > 0;) {
    if (m[i] != 0) return static_cast<int>(i) * 64 + std::bit_width(m[i]);
  }
  return 0;
}

bool test_bit(std::span<const std::uint64_t> m, int pos) {
  const auto limb = static_cast<std::size_t>(pos / 64);
  return limb < m.size() && ((m[limb] >> (pos % 64)) & 1) != 0;
}

// Bits [lo, lo + count) of m, count <= 64, lo >= 0.
std::uint64_t bit_range(std::span<const std::uint64_t> m, int lo, int count) {
  std::uint64_t out = 0;
  for (int i = count - 1; i >= 0; --i) out = (out << 1) | (test_bit(m, lo + i) ? 1 : 0);
  return out;
}

bool any_below(std::span<const std::uint64_t> m, int pos) {
  const auto full = static_cast<std::size_t>(pos / 64);
  for (std::size_t i = 0; i < full && i < m.size(); ++i) {
    if (m[i] != 0) return true;
  }
  if (full < m.size() && pos % 64 != 0) {
    return (m[full] & ((std::uint64_t{1} << (pos % 64)) - 1)) != 0;
  }
  return false;
}

}  // namespace

RoundedSum round_scaled(std::span<const std::uint64_t> magnitude, int scale, bool negative,
                        bool sticky) {
  const int length = bit_length(magnitude);
  RoundedSum r;
  if (length == 0) {
    // Callers never pass a zero magnitude with sticky set.
    return r;
  }
  const int msb_exp = length - 1 + scale;
  r.msd_exponent = msb_exp;
  const int ulp_exp = std::max(msb_exp - 52, -1074);
  const int cut = ulp_exp - scale;  // bits below `cut` are rounded away

  std::uint64_t kept = 0;
  bool round_bit = false;
  bool below = sticky;
  if (cut <= 0) {
    kept = bit_range(magnitude, 0, length);
  } else {
    kept = bit_range(magnitude, cut, length - cut);
    round_bit = test_bit(magnitude, cut - 1);
    below = below || any_below(magnitude, cut - 1);
  }
  const bool up = round_bit && (below || (kept & 1) != 0);
  kept += up ? 1 : 0;
  double value = std::ldexp(static_cast<double>(kept), std::max(cut, 0) + scale);
  const bool overflow = std::isinf(value);
  if (round_bit || below || overflow) {
    r.exact = false;
    const bool magnitude_up = up || overflow;
    r.direction = (magnitude_up != negative) ? Rounding::RoundedUp : Rounding::RoundedDown;
  }
  r.value = negative ? -value : value;
  return r;
}

void ExactFixedPoint::add(double x) {
  const Unpacked u = unpack(x);
  if (u.mantissa == 0) return;
  const auto limb = static_cast<std::size_t>(u.position / 64);
  const unsigned __int128 wide = static_cast<unsigned __int128>(u.mantissa)
                                 << (u.position % 64);
  std::uint64_t parts[2] = {static_cast<std::uint64_t>(wide),
                            static_cast<std::uint64_t>(wide >> 64)};
  if (!u.negative) {
    std::uint64_t carry = 0;
    for (std::size_t i = limb; i < kLimbs; ++i) {
      const std::uint64_t addend = i - limb < 2 ? parts[i - limb] : 0;
      if (addend == 0 && carry == 0 && i - limb >= 2) break;
      const unsigned __int128 s = static_cast<unsigned __int128>(limbs_[i]) + addend + carry;
      limbs_[i] = static_cast<std::uint64_t>(s);
      carry = static_cast<std::uint64_t>(s >> 64);
    }
  } else {
    std::uint64_t borrow = 0;
    for (std::size_t i = limb; i < kLimbs; ++i) {
      const std::uint64_t sub = i - limb < 2 ? parts[i - limb] : 0;
      if (sub == 0 && borrow == 0 && i - limb >= 2) break;
      const std::uint64_t cur = limbs_[i];
      const std::uint64_t d = cur - sub - borrow;
      borrow = (cur < sub || (cur - sub) < borrow) ? 1 : 0;
      limbs_[i] = d;
    }
  }
}

void ExactFixedPoint::add(const ExactFixedPoint& other) noexcept {
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < kLimbs; ++i) {
    const unsigned __int128 s =
        static_cast<unsigned __int128>(limbs_[i]) + other.limbs_[i] + carry;
    limbs_[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<std::uint64_t>(s >> 64);
  }
}

bool ExactFixedPoint::is_zero() const noexcept {
  return std::all_of(limbs_.begin(), limbs_.end(), [](std::uint64_t l) { return l == 0; });
}

std::vector<std::uint64_t> ExactFixedPoint::magnitude() const {
  std::vector<std::uint64_t> m(limbs_.begin(), limbs_.end());
  if (is_negative()) {
    std::uint64_t carry = 1;
    for (auto& l : m) {
      const unsigned __int128 s = static_cast<unsigned __int128>(~l) + carry;
      l = static_cast<std::uint64_t>(s);
      carry = static_cast<std::uint64_t>(s >> 64);
    }
  }
  while (!m.empty() && m.back() == 0) m.pop_back();
  return m;
}

RoundedSum ExactFixedPoint::round() const {
  return round_scaled(magnitude(), -1074, is_negative());
}

RoundedSum oracle_sum(std::span<const double> xs) {
  ExactFixedPoint acc;
  for (double x : xs) acc.add(x);
  return acc.round();
}

double naive_sum(std::span<const double> xs) noexcept {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

double compensated_sum(std::span<const double> xs) noexcept {
  double s = 0.0;
  double c = 0.0;
  for (double x : xs) {
    // AddTwo (Knuth): s + x == t + e exactly.
    const double t = s + x;
    const double bp = t - s;
    const double e = (s - (t - bp)) + (x - bp);
    s = t;
    c += e;
  }
  return s + c;
}

}  // namespace ssum
