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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "ssum/radix.hpp"
#include "ssum/rounded_sum.hpp"
#include "ssum/value_stream.hpp"

namespace ssum {

/// One regularized digit as stored in run files: 4-byte index then 8-byte
/// mantissa, both little-endian, no padding.
struct ComponentRecord {
  std::int32_t index = 0;
  std::int64_t mantissa = 0;

  friend constexpr bool operator==(const ComponentRecord&, const ComponentRecord&) = default;
};

inline constexpr std::size_t kRecordSize = 12;

std::array<unsigned char, kRecordSize> encode_record(const ComponentRecord& r) noexcept;
ComponentRecord decode_record(const unsigned char* bytes) noexcept;

/// Working-memory limit of the external engine. Resident data is charged
/// by payload size: 12 bytes per record, 8 per input value or dense digit.
struct MemoryBudget {
  std::size_t bytes = 64u << 20;
  /// Records per sorted run.
  std::size_t block_records = 1u << 16;
};

struct ExtmemStats {
  std::uint64_t values = 0;
  std::uint64_t records = 0;
  std::size_t runs = 0;
  std::size_t fan_in = 0;
  std::size_t merge_passes = 0;
  std::uint64_t emitted_digits = 0;
  std::size_t peak_resident_bytes = 0;
  std::size_t budget_bytes = 0;
};

/// Sort-based external-memory sum.
///
/// Values are split into regularized records, spilled as sorted runs of
/// block_records records (tmpdir/run_%04d.cmp), merged k ways at a time,
/// and scanned in ascending index order through a four-digit window that
/// emits each digit once the scan has passed it. A back-to-front pass over
/// the emitted digits then loads them for rounding. tmpdir must exist and
/// is not shared with another running call; run files are removed before
/// returning. Throws BudgetTooSmall, IoFailure, NonFiniteInput.
RoundedSum sum_external(ValueStream& input, const MemoryBudget& budget,
                        const std::filesystem::path& tmpdir, ExtmemStats* stats = nullptr,
                        const RadixConfig& config = {},
                        NonFinitePolicy policy = NonFinitePolicy::Reject);

/// One pass, one dense accumulator, add_scalar per value.
RoundedSum sum_inmemory_stream(ValueStream& input,
                               NonFinitePolicy policy = NonFinitePolicy::Reject);

}  // namespace ssum
