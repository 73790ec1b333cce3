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

#include "ssum/sparse_accumulator.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "ssum/errors.hpp"

namespace ssum {

SparseAccumulator::SparseAccumulator(const RadixConfig& config, std::optional<std::size_t> gamma)
    : config_(config), gamma_(gamma) {
  if (gamma_ && *gamma_ == 0) throw std::invalid_argument("truncation width must be >= 1");
}

SparseAccumulator SparseAccumulator::from_double(double x, const RadixConfig& config,
                                                 std::optional<std::size_t> gamma) {
  SparseAccumulator out(config, gamma);
  out.digits_ = decompose(x, config);
  out.truncate();
  return out;
}

SparseAccumulator SparseAccumulator::from_dense(const DenseAccumulator& dense,
                                                std::optional<std::size_t> gamma) {
  DenseAccumulator copy = dense;
  copy.renormalize();
  SparseAccumulator out(dense.config(), gamma);
  out.digits_ = copy.nonzero_digits();
  out.truncate();
  return out;
}

SparseAccumulator SparseAccumulator::from_digits(const RadixConfig& config,
                                                 std::vector<Digit> digits,
                                                 std::optional<std::size_t> gamma) {
  const std::int64_t lim = config.max_digit();
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && digits[i].index <= digits[i - 1].index) {
      throw std::invalid_argument("sparse digits must have strictly increasing indices");
    }
    if (digits[i].mantissa < -lim || digits[i].mantissa > lim) {
      throw std::invalid_argument("sparse digit mantissa outside the regularized range");
    }
  }
  SparseAccumulator out(config, gamma);
  out.digits_ = std::move(digits);
  out.truncate();
  return out;
}

void SparseAccumulator::truncate() {
  if (!gamma_ || digits_.size() <= *gamma_) return;
  const auto drop = static_cast<std::ptrdiff_t>(digits_.size() - *gamma_);
  digits_.erase(digits_.begin(), digits_.begin() + drop);
  truncated_any_ = true;
  min_kept_index_ = digits_.front().index;
}

DenseAccumulator SparseAccumulator::to_dense() const {
  return DenseAccumulator::from_digits(config_, digits_);
}

int SparseAccumulator::least_kept_exponent() const {
  if (digits_.empty()) throw EmptyAccumulator("least_kept_exponent of an empty accumulator");
  return config_.exponent_of(digits_.front().index);
}

SparseAccumulator merge_add(const SparseAccumulator& a, const SparseAccumulator& b) {
  if (a.config_ != b.config_) throw ConfigMismatch(a.config_.width(), b.config_.width());

  std::optional<std::size_t> gamma = a.gamma_;
  if (b.gamma_) gamma = gamma ? std::min(*gamma, *b.gamma_) : b.gamma_;

  const std::int64_t radix = a.config_.radix();
  const std::int64_t lim = a.config_.max_digit();

  SparseAccumulator out(a.config_, gamma);
  out.truncated_any_ = a.truncated_any_ || b.truncated_any_;
  if (a.min_kept_index_ && b.min_kept_index_) {
    out.min_kept_index_ = std::max(*a.min_kept_index_, *b.min_kept_index_);
  } else {
    out.min_kept_index_ = a.min_kept_index_ ? a.min_kept_index_ : b.min_kept_index_;
  }
  out.digits_.reserve(a.digits_.size() + b.digits_.size() + 1);

  // Pending carry C_{i+1} produced at index carry_from.
  std::int64_t carry = 0;
  std::int32_t carry_from = 0;
  auto emit = [&](std::int32_t index, std::int64_t p) {
    std::int64_t carry_in = 0;
    if (carry != 0) {
      if (carry_from + 1 == index) {
        carry_in = carry;
      } else {
        out.digits_.push_back(Digit{carry_from + 1, carry});
      }
    }
    const std::int64_t carry_out = p >= lim ? 1 : (p <= -lim ? -1 : 0);
    out.digits_.push_back(Digit{index, p - carry_out * radix + carry_in});
    carry = carry_out;
    carry_from = index;
  };

  auto ia = a.digits_.begin();
  auto ib = b.digits_.begin();
  while (ia != a.digits_.end() || ib != b.digits_.end()) {
    if (ib == b.digits_.end() || (ia != a.digits_.end() && ia->index < ib->index)) {
      emit(ia->index, ia->mantissa);
      ++ia;
    } else if (ia == a.digits_.end() || ib->index < ia->index) {
      emit(ib->index, ib->mantissa);
      ++ib;
    } else {
      emit(ia->index, ia->mantissa + ib->mantissa);
      ++ia;
      ++ib;
    }
  }
  if (carry != 0) out.digits_.push_back(Digit{carry_from + 1, carry});

  out.truncate();
  return out;
}

}  // namespace ssum
