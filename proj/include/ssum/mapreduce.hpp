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
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "ssum/radix.hpp"
#include "ssum/rounded_sum.hpp"
#include "ssum/sparse_accumulator.hpp"

namespace ssum {

// Wire layout: "SSAC", version, digit width, two reserved flag bytes, a
// little-endian u32 record count, then (i32 index, i64 mantissa) records
// in ascending index order, little-endian.
inline constexpr unsigned char kWireMagic[4] = {'S', 'S', 'A', 'C'};
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kWireHeaderSize = 12;
inline constexpr std::size_t kWireRecordSize = 12;

/// Throws NotRegularized when a mantissa lies outside [-(R-1), R-1].
std::vector<std::uint8_t> encode(const SparseAccumulator& s);

/// Throws DecodeError. Truncation metadata is not carried on the wire.
SparseAccumulator decode(std::span<const std::uint8_t> bytes, const RadixConfig& config = {});

enum class Assignment { Random, RoundRobin };

struct JobConfig {
  std::size_t reducers = 1;
  Assignment assign = Assignment::Random;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  RadixConfig config;
  NonFinitePolicy policy = NonFinitePolicy::Reject;
  /// When set, every shuffled segment is also written here as
  /// part-PPPPP-rRRR.ssac (reducer numbered from 1).
  std::optional<std::filesystem::path> dump_dir;

  /// Throws std::invalid_argument for zero reducers or workers.
  void validate() const;
};

struct JobStats {
  std::size_t partitions = 0;
  std::size_t shuffled_bytes = 0;
  std::size_t largest_segment_bytes = 0;
  /// Segments received by each reducer.
  std::vector<std::size_t> reducer_segments;
};

/// Reducer (0-based) that receives the combined accumulator of `partition`.
std::size_t reducer_for(std::size_t partition, const JobConfig& cfg) noexcept;

/// Single-round MapReduce over in-process workers. Each partition is
/// combined into one sparse accumulator, encoded, shuffled to its reducer
/// and decoded there; reducers merge what they receive in partition order,
/// and a final step merges the reducer outputs and rounds.
RoundedSum run_job(std::span<const std::span<const double>> partitions, const JobConfig& cfg,
                   JobStats* stats = nullptr);

/// Splits xs into `parts` contiguous slices whose sizes differ by at most 1.
std::vector<std::span<const double>> split_even(std::span<const double> xs, std::size_t parts);

}  // namespace ssum
