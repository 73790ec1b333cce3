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

#include "ssum/dense_accumulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>

#include "ssum/errors.hpp"

namespace ssum {
namespace detail {

std::size_t decompose_into(double x, const RadixConfig& config,
                           std::span<Digit, kMaxDecomposedDigits> out) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const auto biased = static_cast<int>((bits >> 52) & 0x7ff);
  if (biased == 0x7ff) throw NonFiniteInput(x);

  std::uint64_t mantissa = bits & ((std::uint64_t{1} << 52) - 1);
  // Bit position of the mantissa's lsb, counted from 2^-1074.
  int position = 0;
  if (biased != 0) {
    mantissa |= std::uint64_t{1} << 52;
    position = biased - 1;
  }
  if (mantissa == 0) return 0;

  const bool negative = (bits >> 63) != 0;
  const int width = config.width();
  const auto mask = static_cast<std::uint64_t>(config.max_digit());
  auto index = static_cast<std::int32_t>(position / width);
  unsigned __int128 wide = static_cast<unsigned __int128>(mantissa) << (position % width);

  std::size_t count = 0;
  while (wide != 0) {
    const auto chunk = static_cast<std::int64_t>(static_cast<std::uint64_t>(wide) & mask);
    if (chunk != 0) out[count++] = Digit{index, negative ? -chunk : chunk};
    wide >>= width;
    ++index;
  }
  return count;
}

}  // namespace detail

std::vector<Digit> decompose(double x, const RadixConfig& config) {
  std::array<Digit, kMaxDecomposedDigits> buf;
  const std::size_t n = detail::decompose_into(x, config, buf);
  return {buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n)};
}

DenseAccumulator::DenseAccumulator(const RadixConfig& config)
    : config_(config), digits_(static_cast<std::size_t>(config.digit_count()), 0) {}

void DenseAccumulator::add_scalar(double x) {
  std::array<Digit, kMaxDecomposedDigits> buf;
  const std::size_t n = detail::decompose_into(x, config_, buf);
  if (n == 0) return;
  add_digits(std::span<const Digit>(buf.data(), n));
}

void DenseAccumulator::add_digits(std::span<const Digit> digits) {
  if (raw_adds_ >= config_.max_raw_adds()) renormalize();
  const auto limit = static_cast<std::int32_t>(digits_.size());
  for (const Digit& d : digits) {
    if (d.index < 0 || d.index >= limit) throw IndexOutOfRange(d.index, limit);
    digits_[static_cast<std::size_t>(d.index)] += d.mantissa;
  }
  ++raw_adds_;
}

void DenseAccumulator::renormalize() {
  const int width = config_.width();
  const std::int64_t half = config_.radix() / 2;
  const std::int64_t mask = config_.max_digit();
  std::int64_t carry = 0;
  for (std::int64_t& d : digits_) {
    const std::int64_t v = d + carry;
    const std::int64_t r = ((v + half) & mask) - half;
    carry = (v - r) >> width;
    d = r;
  }
  if (carry != 0) throw CapacityOverflow("renormalize: carry out of the top digit");
  raw_adds_ = 0;
}

void DenseAccumulator::canonicalize() {
  renormalize();
  const auto top = std::find_if(digits_.rbegin(), digits_.rend(),
                                [](std::int64_t d) { return d != 0; });
  if (top == digits_.rend()) return;
  const bool negative = *top < 0;
  if (negative) {
    for (std::int64_t& d : digits_) d = -d;
  }
  const int width = config_.width();
  const std::int64_t mask = config_.max_digit();
  std::int64_t borrow = 0;
  for (std::int64_t& d : digits_) {
    const std::int64_t v = d + borrow;
    const std::int64_t r = v & mask;
    borrow = (v - r) >> width;
    d = r;
  }
  // A positive total leaves no borrow past the top digit.
  if (negative) {
    for (std::int64_t& d : digits_) d = -d;
  }
}

bool DenseAccumulator::is_regularized() const noexcept {
  const std::int64_t lim = config_.max_digit();
  return std::all_of(digits_.begin(), digits_.end(),
                     [lim](std::int64_t d) { return d >= -lim && d <= lim; });
}

bool DenseAccumulator::is_zero() const noexcept {
  DenseAccumulator copy = *this;
  copy.renormalize();
  return std::all_of(copy.digits_.begin(), copy.digits_.end(),
                     [](std::int64_t d) { return d == 0; });
}

std::vector<Digit> DenseAccumulator::nonzero_digits() const {
  std::vector<Digit> out;
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (digits_[i] != 0) out.push_back(Digit{static_cast<std::int32_t>(i), digits_[i]});
  }
  return out;
}

DenseAccumulator DenseAccumulator::from_digits(const RadixConfig& config,
                                               std::span<const Digit> digits) {
  DenseAccumulator acc(config);
  const auto limit = static_cast<std::int32_t>(acc.digits_.size());
  for (const Digit& d : digits) {
    if (d.index < 0 || d.index >= limit) throw IndexOutOfRange(d.index, limit);
    acc.digits_[static_cast<std::size_t>(d.index)] += d.mantissa;
  }
  if (!acc.is_regularized()) acc.raw_adds_ = 1;
  return acc;
}

DenseAccumulator add_accumulators(const DenseAccumulator& a, const DenseAccumulator& b) {
  if (a.config_ != b.config_) throw ConfigMismatch(a.config_.width(), b.config_.width());
  if (!a.is_regularized() || !b.is_regularized()) {
    throw NotRegularized("add_accumulators: inputs must be regularized");
  }
  const std::int64_t radix = a.config_.radix();
  const std::int64_t lim = a.config_.max_digit();
  DenseAccumulator out(a.config_);
  std::int64_t carry_in = 0;
  for (std::size_t i = 0; i < out.digits_.size(); ++i) {
    const std::int64_t p = a.digits_[i] + b.digits_[i];
    const std::int64_t carry_out = p >= lim ? 1 : (p <= -lim ? -1 : 0);
    out.digits_[i] = p - carry_out * radix + carry_in;
    carry_in = carry_out;
  }
  if (carry_in != 0) throw CapacityOverflow("add_accumulators: carry out of the top digit");
  return out;
}

RoundedSum round_to_double(const DenseAccumulator& acc) {
  DenseAccumulator canon = acc;
  canon.canonicalize();
  const auto digits = canon.digits();
  const int width = canon.config().width();

  int top = static_cast<int>(digits.size()) - 1;
  while (top >= 0 && digits[static_cast<std::size_t>(top)] == 0) --top;
  if (top < 0) return RoundedSum{};

  const bool negative = digits[static_cast<std::size_t>(top)] < 0;
  auto magnitude = [&](int i) {
    const std::int64_t d = digits[static_cast<std::size_t>(i)];
    return static_cast<std::uint64_t>(negative ? -d : d);
  };
  // Bits [lo, lo + count) of the magnitude, count <= 64.
  auto extract = [&](int lo, int count) {
    std::uint64_t out = 0;
    for (int pos = lo + count - 1; pos >= lo; --pos) {
      out = (out << 1) | ((magnitude(pos / width) >> (pos % width)) & 1);
    }
    return out;
  };

  const int msb = top * width + std::bit_width(magnitude(top)) - 1;
  RoundedSum result;
  result.msd_exponent = msb + kMinBit;

  double value = 0.0;
  if (msb < 53) {
    // Fits the subnormal or lowest-binade encoding verbatim.
    value = std::bit_cast<double>(extract(0, msb + 1));
  } else {
    const int lo = msb - 53;  // round bit
    const std::uint64_t window = extract(lo, 54);
    bool sticky = (magnitude(lo / width) & ((std::uint64_t{1} << (lo % width)) - 1)) != 0;
    for (int i = 0; i < lo / width && !sticky; ++i) sticky = magnitude(i) != 0;

    std::uint64_t mantissa = window >> 1;
    const bool round_bit = (window & 1) != 0;
    bool up = round_bit && (sticky || (mantissa & 1) != 0);
    mantissa += up ? 1 : 0;
    int lsb = lo + 1;
    if (mantissa == (std::uint64_t{1} << 53)) {
      mantissa >>= 1;
      ++lsb;
    }
    const int biased = lsb + 1;
    bool overflow = false;
    if (biased >= 0x7ff) {
      value = std::numeric_limits<double>::infinity();
      overflow = true;
      up = true;
    } else {
      const std::uint64_t bits = (static_cast<std::uint64_t>(biased) << 52) |
                                 (mantissa & ((std::uint64_t{1} << 52) - 1));
      value = std::bit_cast<double>(bits);
    }
    if (round_bit || sticky || overflow) {
      result.exact = false;
      result.direction = (up != negative) ? Rounding::RoundedUp : Rounding::RoundedDown;
    }
  }
  result.value = negative ? -value : value;
  return result;
}

}  // namespace ssum
