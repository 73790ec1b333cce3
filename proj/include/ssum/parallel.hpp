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

#include "ssum/rounded_sum.hpp"
#include "ssum/sparse_accumulator.hpp"

namespace ssum {

/// Shape of a tree reduction: chunk_size elements per leaf, a binary tree
/// over the leaves, `workers` threads.
struct ReductionPlan {
  std::size_t workers = 1;
  std::size_t chunk_size = 4096;

  /// Throws std::invalid_argument for zero workers or chunk size.
  void validate() const;
  /// ceil(n / chunk_size).
  std::size_t leaf_count(std::size_t n) const noexcept;
};

/// Exact sum by a parallel binary tree over dense accumulators. Leaves
/// absorb their chunk through add_scalar; each internal node renormalizes
/// its children and combines them with add_accumulators. The result is
/// bit-identical for every plan and input order.
RoundedSum sum_tree(std::span<const double> xs, const ReductionPlan& plan = {},
                    NonFinitePolicy policy = NonFinitePolicy::Reject);

enum class StopMode {
  /// Exponent of y's lsb must clear E_min + ceil(log2 n) + 1; the FloatProbe
  /// check then confirms no rounding boundary lies within reach.
  ExponentGap,
  /// y must round identically after adding +n*eps_min and -n*eps_min
  /// exactly to the truncated accumulator.
  FloatProbe,
};

enum class StopReason { StoppingCondition, Untruncated };

struct TruncatedRunReport {
  int iterations = 0;
  std::uint64_t final_r = 0;
  StopReason stopped_by = StopReason::Untruncated;
  RoundedSum result;
};

/// Sound early-exit test for a truncated sum.
///
/// `n` bounds how many truncations fed y. Every digit any of them dropped
/// sat below y's least retained digit, so the total dropped mass is below
/// n * eps_min with eps_min = 2^E_min, E_min = y.least_kept_exponent(). The
/// test returns true only when rounding y's value and any value within that
/// distance gives the same double. An untruncated y always passes.
/// Throws EmptyAccumulator when y is truncated yet empty.
bool stopping_condition(const SparseAccumulator& y, std::uint64_t n, StopMode mode);

/// Condition-number-sensitive driver: runs the tree with gamma = r
/// truncated sparse accumulators for r = r0, r0^2, r0^4, ... until the
/// stopping condition holds or the final accumulator was never truncated.
/// The result always equals sum_tree's.
TruncatedRunReport sum_truncated(std::span<const double> xs, const ReductionPlan& plan = {},
                                 std::uint64_t r0 = 2, StopMode mode = StopMode::ExponentGap,
                                 NonFinitePolicy policy = NonFinitePolicy::Reject);

struct ConditionReport {
  /// sum|x| / |sum x| rounded once; +inf when infinite or beyond binary64.
  double c = 1.0;
  double log2_c = 0.0;
  /// The exact sum is zero.
  bool infinite = false;
};

/// Throws NonFiniteInput. A zero (or empty) sum reports infinite = true.
ConditionReport condition_number(std::span<const double> xs);

}  // namespace ssum
