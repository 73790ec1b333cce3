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

#include "big_unsigned.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "ssum/oracle.hpp"

namespace ssum::detail {

BigUnsigned::BigUnsigned(std::uint64_t v) {
  if (v != 0) limbs_.push_back(v);
}

BigUnsigned::BigUnsigned(std::vector<std::uint64_t> limbs) : limbs_(std::move(limbs)) { trim(); }

void BigUnsigned::trim() noexcept {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

int BigUnsigned::bit_length() const noexcept {
  if (limbs_.empty()) return 0;
  return static_cast<int>(limbs_.size() - 1) * 64 + std::bit_width(limbs_.back());
}

double BigUnsigned::log2() const noexcept {
  if (limbs_.empty()) return -std::numeric_limits<double>::infinity();
  const int length = bit_length();
  // Leading 64 bits, left-aligned.
  const int shift = 64 - std::bit_width(limbs_.back());
  std::uint64_t top = limbs_.back() << shift;
  if (shift != 0 && limbs_.size() > 1) top |= limbs_[limbs_.size() - 2] >> (64 - shift);
  return std::log2(static_cast<double>(top)) + (length - 64);
}

BigUnsigned BigUnsigned::shifted_left(int bits) const {
  if (limbs_.empty() || bits == 0) return *this;
  const auto whole = static_cast<std::size_t>(bits / 64);
  const int part = bits % 64;
  std::vector<std::uint64_t> out(limbs_.size() + whole + 1, 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    out[i + whole] |= limbs_[i] << part;
    if (part != 0) out[i + whole + 1] |= limbs_[i] >> (64 - part);
  }
  return BigUnsigned(std::move(out));
}

void BigUnsigned::subtract(const BigUnsigned& other) {
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const std::uint64_t sub = i < other.limbs_.size() ? other.limbs_[i] : 0;
    const std::uint64_t cur = limbs_[i];
    limbs_[i] = cur - sub - borrow;
    borrow = (cur < sub || (cur - sub) < borrow) ? 1 : 0;
  }
  if (borrow != 0) throw std::logic_error("BigUnsigned::subtract underflow");
  trim();
}

int compare(const BigUnsigned& a, const BigUnsigned& b) noexcept {
  if (a.limbs_.size() != b.limbs_.size()) return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
  for (std::size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
  }
  return 0;
}

BigUnsigned magnitude_of(const DenseAccumulator& acc, bool* negative) {
  DenseAccumulator canon = acc;
  canon.canonicalize();
  const auto digits = canon.digits();
  const int width = canon.config().width();
  bool neg = false;
  for (std::int64_t d : digits) {
    if (d != 0) neg = d < 0;
  }
  if (negative != nullptr) *negative = neg;

  std::vector<std::uint64_t> limbs(
      static_cast<std::size_t>((static_cast<int>(digits.size()) * width) / 64 + 2), 0);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const auto mag = static_cast<std::uint64_t>(neg ? -digits[i] : digits[i]);
    if (mag == 0) continue;
    const std::size_t pos = i * static_cast<std::size_t>(width);
    const unsigned __int128 wide = static_cast<unsigned __int128>(mag) << (pos % 64);
    limbs[pos / 64] |= static_cast<std::uint64_t>(wide);
    limbs[pos / 64 + 1] |= static_cast<std::uint64_t>(wide >> 64);
  }
  return BigUnsigned(std::move(limbs));
}

RoundedSum round_quotient(const BigUnsigned& num, const BigUnsigned& den, int scale,
                          bool negative) {
  if (den.is_zero()) throw std::invalid_argument("round_quotient: zero denominator");
  if (num.is_zero()) return RoundedSum{};

  // Scale so the quotient carries 57 or 58 significant bits.
  constexpr int kQuotientBits = 57;
  const int shift = kQuotientBits - (num.bit_length() - den.bit_length());
  BigUnsigned rem = shift > 0 ? num.shifted_left(shift) : num;
  const BigUnsigned divisor = shift < 0 ? den.shifted_left(-shift) : den;

  std::uint64_t quotient = 0;
  for (int j = kQuotientBits + 1; j >= 0; --j) {
    const BigUnsigned step = divisor.shifted_left(j);
    if (compare(rem, step) >= 0) {
      rem.subtract(step);
      quotient |= std::uint64_t{1} << j;
    }
  }
  const std::uint64_t limbs[1] = {quotient};
  return round_scaled(limbs, scale - shift, negative, !rem.is_zero());
}

}  // namespace ssum::detail
