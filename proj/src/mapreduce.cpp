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

#include "ssum/mapreduce.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "parallel_for.hpp"
#include "ssum/dense_accumulator.hpp"
#include "ssum/errors.hpp"

namespace ssum {
namespace {

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int b = 0; b < bytes; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t get_le(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int b = bytes - 1; b >= 0; --b) v = (v << 8) | p[b];
  return v;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Combined {
  std::vector<std::uint8_t> bytes;
  SpecialValues specials;
};

void dump_segment(const std::filesystem::path& dir, std::size_t partition, std::size_t reducer,
                  const std::vector<std::uint8_t>& bytes) {
  char name[48];
  std::snprintf(name, sizeof name, "part-%05zu-r%03zu.ssac", partition, reducer + 1);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure(path, IoOp::Open);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoFailure(path, IoOp::Write);
}

}  // namespace

std::vector<std::uint8_t> encode(const SparseAccumulator& s) {
  const RadixConfig& cfg = s.config();
  std::vector<std::uint8_t> out;
  out.reserve(kWireHeaderSize + s.size() * kWireRecordSize);
  for (unsigned char c : kWireMagic) out.push_back(c);
  out.push_back(kWireVersion);
  out.push_back(static_cast<std::uint8_t>(cfg.width()));
  put_le(out, 0, 2);
  put_le(out, s.size(), 4);
  for (const Digit& d : s.digits()) {
    if (d.mantissa > cfg.max_digit() || d.mantissa < -cfg.max_digit()) {
      throw NotRegularized("cannot encode a raw digit");
    }
    put_le(out, static_cast<std::uint32_t>(d.index), 4);
    put_le(out, static_cast<std::uint64_t>(d.mantissa), 8);
  }
  return out;
}

SparseAccumulator decode(std::span<const std::uint8_t> bytes, const RadixConfig& config) {
  using K = DecodeErrorKind;
  if (bytes.size() < kWireHeaderSize) {
    if (bytes.size() >= 4 && !std::equal(bytes.begin(), bytes.begin() + 4, kWireMagic)) {
      throw DecodeError(K::BadMagic, "bad magic");
    }
    throw DecodeError(K::Truncated, "header needs 12 bytes, got " + std::to_string(bytes.size()));
  }
  if (!std::equal(bytes.begin(), bytes.begin() + 4, kWireMagic)) {
    throw DecodeError(K::BadMagic, "bad magic");
  }
  if (bytes[4] != kWireVersion) {
    throw DecodeError(K::BadVersion, "unsupported version " + std::to_string(bytes[4]));
  }
  if (get_le(bytes.data() + 6, 2) != 0) {
    throw DecodeError(K::BadVersion, "reserved flags are set");
  }
  if (bytes[5] != config.width()) {
    throw DecodeError(K::WidthMismatch, "digit width " + std::to_string(bytes[5]) +
                                            ", expected " + std::to_string(config.width()));
  }
  const std::uint64_t count = get_le(bytes.data() + 8, 4);
  const std::uint64_t body = bytes.size() - kWireHeaderSize;
  if (body < count * kWireRecordSize) {
    throw DecodeError(K::Truncated, std::to_string(count) + " records announced, " +
                                        std::to_string(body / kWireRecordSize) + " present");
  }
  if (body > count * kWireRecordSize) {
    throw DecodeError(K::TrailingBytes, "bytes after the last record");
  }
  std::vector<Digit> digits;
  digits.reserve(count);
  const std::uint8_t* p = bytes.data() + kWireHeaderSize;
  for (std::uint64_t i = 0; i < count; ++i, p += kWireRecordSize) {
    const auto index = static_cast<std::int32_t>(static_cast<std::uint32_t>(get_le(p, 4)));
    const auto mantissa = static_cast<std::int64_t>(get_le(p + 4, 8));
    if (index < 0 || index >= config.digit_count()) {
      throw DecodeError(K::BadIndex, "index " + std::to_string(index) + " out of range");
    }
    if (!digits.empty() && index <= digits.back().index) {
      throw DecodeError(K::UnsortedIndices, "index " + std::to_string(index) + " after " +
                                                std::to_string(digits.back().index));
    }
    if (mantissa > config.max_digit() || mantissa < -config.max_digit()) {
      throw DecodeError(K::MantissaOutOfRange, "mantissa at index " + std::to_string(index));
    }
    digits.push_back(Digit{index, mantissa});
  }
  return SparseAccumulator::from_digits(config, std::move(digits));
}

void JobConfig::validate() const {
  if (reducers == 0) throw std::invalid_argument("reducer count must be at least 1");
  if (workers == 0) throw std::invalid_argument("worker count must be at least 1");
}

std::size_t reducer_for(std::size_t partition, const JobConfig& cfg) noexcept {
  if (cfg.assign == Assignment::RoundRobin) return partition % cfg.reducers;
  return splitmix64(cfg.seed ^ splitmix64(partition)) % cfg.reducers;
}

RoundedSum run_job(std::span<const std::span<const double>> partitions, const JobConfig& cfg,
                   JobStats* stats) {
  cfg.validate();

  // Map and combine: one encoded sparse accumulator per partition.
  std::vector<Combined> combined(partitions.size());
  detail::parallel_for(partitions.size(), cfg.workers, [&](std::size_t j) {
    DenseAccumulator acc(cfg.config);
    for (double x : partitions[j]) {
      if (combined[j].specials.admit(x, cfg.policy)) acc.add_scalar(x);
    }
    combined[j].bytes = encode(SparseAccumulator::from_dense(acc));
  });

  // Shuffle.
  std::vector<std::vector<std::size_t>> inbox(cfg.reducers);
  JobStats local;
  local.partitions = partitions.size();
  SpecialValues specials;
  for (std::size_t j = 0; j < combined.size(); ++j) {
    const std::size_t r = reducer_for(j, cfg);
    inbox[r].push_back(j);
    local.shuffled_bytes += combined[j].bytes.size();
    local.largest_segment_bytes = std::max(local.largest_segment_bytes, combined[j].bytes.size());
    specials.merge(combined[j].specials);
    if (cfg.dump_dir) dump_segment(*cfg.dump_dir, j, r, combined[j].bytes);
  }
  for (const auto& in : inbox) local.reducer_segments.push_back(in.size());

  // Reduce.
  std::vector<SparseAccumulator> reduced(cfg.reducers, SparseAccumulator(cfg.config));
  detail::parallel_for(cfg.reducers, cfg.workers, [&](std::size_t r) {
    for (std::size_t j : inbox[r]) {
      reduced[r] = merge_add(reduced[r], decode(combined[j].bytes, cfg.config));
    }
  });

  // Post-process.
  SparseAccumulator total(cfg.config);
  for (const auto& part : reduced) total = merge_add(total, part);
  if (stats != nullptr) *stats = std::move(local);
  if (specials.any()) return specials.result();
  return round_to_double(total.to_dense());
}

std::vector<std::span<const double>> split_even(std::span<const double> xs, std::size_t parts) {
  if (parts == 0) throw std::invalid_argument("partition count must be at least 1");
  std::vector<std::span<const double>> out;
  out.reserve(parts);
  const std::size_t base = xs.size() / parts;
  const std::size_t extra = xs.size() % parts;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    out.push_back(xs.subspan(pos, len));
    pos += len;
  }
  return out;
}

}  // namespace ssum
