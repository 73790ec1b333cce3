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

#include "ssum/parallel.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "big_unsigned.hpp"
#include "parallel_for.hpp"
#include "ssum/dense_accumulator.hpp"
#include "ssum/errors.hpp"

namespace ssum {
namespace {

std::span<const double> chunk_of(std::span<const double> xs, const ReductionPlan& plan,
                                 std::size_t leaf) {
  const std::size_t begin = leaf * plan.chunk_size;
  return xs.subspan(begin, std::min(plan.chunk_size, xs.size() - begin));
}

std::vector<DenseAccumulator> build_leaves(std::span<const double> xs,
                                           const ReductionPlan& plan) {
  std::vector<DenseAccumulator> leaves(plan.leaf_count(xs.size()));
  detail::parallel_for(leaves.size(), plan.workers, [&](std::size_t i) {
    DenseAccumulator acc;
    for (double x : chunk_of(xs, plan, i)) acc.add_scalar(x);
    acc.renormalize();
    leaves[i] = std::move(acc);
  });
  return leaves;
}

int ceil_log2(std::uint64_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

// n * 2^E_min as digits of the accumulator's radix, starting at `index`.
bool add_probe(DenseAccumulator& acc, std::int32_t index, std::uint64_t n, bool negative) {
  const RadixConfig& cfg = acc.config();
  const auto mask = static_cast<std::uint64_t>(cfg.max_digit());
  std::vector<Digit> digits;
  for (std::uint64_t rest = n; rest != 0; rest >>= cfg.width(), ++index) {
    if (index >= cfg.digit_count()) return false;
    const auto d = static_cast<std::int64_t>(rest & mask);
    if (d != 0) digits.push_back(Digit{index, negative ? -d : d});
  }
  acc.add_digits(digits);
  return true;
}

bool probes_agree(const SparseAccumulator& y, const DenseAccumulator& value,
                  const RoundedSum& rounded, std::uint64_t n) {
  const std::int32_t index = y.digits().front().index;
  DenseAccumulator above = value;
  DenseAccumulator below = value;
  if (!add_probe(above, index, n, false) || !add_probe(below, index, n, true)) return false;
  return round_to_double(above).bits() == rounded.bits() &&
         round_to_double(below).bits() == rounded.bits();
}

}  // namespace

void ReductionPlan::validate() const {
  if (workers == 0) throw std::invalid_argument("ReductionPlan: workers must be >= 1");
  if (chunk_size == 0) throw std::invalid_argument("ReductionPlan: chunk_size must be >= 1");
}

std::size_t ReductionPlan::leaf_count(std::size_t n) const noexcept {
  return n == 0 ? 0 : (n + chunk_size - 1) / chunk_size;
}

RoundedSum sum_tree(std::span<const double> xs, const ReductionPlan& plan,
                    NonFinitePolicy policy) {
  plan.validate();
  if (auto special = screen_nonfinite(xs, policy)) return *special;
  std::vector<DenseAccumulator> nodes = build_leaves(xs, plan);
  if (nodes.empty()) return RoundedSum{};
  detail::tree_reduce(nodes, plan.workers,
                      [](const DenseAccumulator& a, const DenseAccumulator& b) {
                        return add_accumulators(a, b);
                      });
  return round_to_double(nodes.front());
}

bool stopping_condition(const SparseAccumulator& y, std::uint64_t n, StopMode mode) {
  if (!y.truncated_any()) return true;
  if (y.empty()) throw EmptyAccumulator("stopping_condition on an empty truncated accumulator");
  n = std::max<std::uint64_t>(n, 1);

  const DenseAccumulator value = y.to_dense();
  const RoundedSum rounded = round_to_double(value);
  if (mode == StopMode::ExponentGap) {
    if (rounded.msd_exponent == kZeroExponent) return false;
    const int lsb = std::max(rounded.msd_exponent - 52, kMinBit);
    if (lsb < y.least_kept_exponent() + ceil_log2(n) + 1) return false;
  }
  return probes_agree(y, value, rounded, n);
}

TruncatedRunReport sum_truncated(std::span<const double> xs, const ReductionPlan& plan,
                                 std::uint64_t r0, StopMode mode, NonFinitePolicy policy) {
  plan.validate();
  if (r0 < 2) throw std::invalid_argument("sum_truncated: r0 must be >= 2");

  TruncatedRunReport report;
  report.iterations = 1;
  report.final_r = r0;
  if (auto special = screen_nonfinite(xs, policy)) {
    report.result = *special;
    return report;
  }

  // Leaf sums do not depend on r; only their truncation does.
  std::vector<std::vector<Digit>> leaf_digits;
  {
    const std::vector<DenseAccumulator> leaves = build_leaves(xs, plan);
    leaf_digits.reserve(leaves.size());
    for (const DenseAccumulator& leaf : leaves) leaf_digits.push_back(leaf.nonzero_digits());
  }
  if (leaf_digits.empty()) return report;

  // Every leaf and every internal merge may truncate once.
  const std::uint64_t truncation_sites = 2 * leaf_digits.size() - 1;
  const RadixConfig config;

  for (std::uint64_t r = r0;; ++report.iterations) {
    report.final_r = r;
    std::vector<SparseAccumulator> nodes(leaf_digits.size());
    detail::parallel_for(nodes.size(), plan.workers, [&](std::size_t i) {
      nodes[i] = SparseAccumulator::from_digits(config, leaf_digits[i], r);
    });
    detail::tree_reduce(nodes, plan.workers,
                        [](const SparseAccumulator& a, const SparseAccumulator& b) {
                          return merge_add(a, b);
                        });
    const SparseAccumulator& root = nodes.front();
    if (!root.truncated_any()) {
      report.stopped_by = StopReason::Untruncated;
      report.result = round_to_double(root.to_dense());
      return report;
    }
    if (stopping_condition(root, truncation_sites, mode)) {
      report.stopped_by = StopReason::StoppingCondition;
      report.result = round_to_double(root.to_dense());
      return report;
    }
    r = r > (std::uint64_t{1} << 32) ? std::numeric_limits<std::uint64_t>::max() : r * r;
  }
}

ConditionReport condition_number(std::span<const double> xs) {
  DenseAccumulator magnitudes;
  DenseAccumulator signed_sum;
  for (double x : xs) {
    signed_sum.add_scalar(x);
    magnitudes.add_scalar(x < 0 ? -x : x);
  }
  const detail::BigUnsigned num = detail::magnitude_of(magnitudes);
  const detail::BigUnsigned den = detail::magnitude_of(signed_sum);

  ConditionReport report;
  if (den.is_zero()) {
    report.c = std::numeric_limits<double>::infinity();
    report.log2_c = std::numeric_limits<double>::infinity();
    report.infinite = true;
    return report;
  }
  report.c = detail::round_quotient(num, den, 0, false).value;
  report.log2_c = compare(num, den) == 0 ? 0.0 : num.log2() - den.log2();
  return report;
}

}  // namespace ssum
