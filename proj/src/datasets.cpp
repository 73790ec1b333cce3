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

#include "ssum/datasets.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <string>
#include <utility>

#include "big_unsigned.hpp"
#include "ssum/dense_accumulator.hpp"
#include "ssum/errors.hpp"

namespace ssum {
namespace {

constexpr int kTopExponent = 960;
constexpr int kMinExponent = -1074;
constexpr int kMaxDelta = 2046;

// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

class BaseValues {
 public:
  BaseValues(const DatasetSpec& spec)
      : rng_(spec.seed),
        range_(static_cast<std::uint64_t>(std::max(spec.delta, 1))),
        low_(std::max(kMinExponent, std::min(0, kTopExponent - spec.delta))) {}

  double positive() {
    const int e = static_cast<int>(bounded(rng_, range_)) + low_;
    const std::uint64_t mantissa = rng_() >> 12;
    std::uint64_t bits = 0;
    if (e >= -1022) {
      bits = (static_cast<std::uint64_t>(e + 1023) << 52) | mantissa;
    } else {
      // Below the normal range: keep the leading bits of 1.m.
      const int shift = -1022 - e;
      bits = ((std::uint64_t{1} << 52) | mantissa) >> shift;
    }
    return std::bit_cast<double>(bits);
  }

  double mixed() {
    const double v = positive();
    return (rng_() >> 63) != 0 ? -v : v;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::uint64_t range_;
  int low_;
};

}  // namespace

void DatasetSpec::validate() const {
  const int id = static_cast<int>(kind);
  if (id < 1 || id > 4) throw InvalidSpec("dataset kind must be 1..4, got " + std::to_string(id));
  if (n == 0) throw InvalidSpec("dataset size must be at least 1");
  if (delta < 0 || delta > kMaxDelta) {
    throw InvalidSpec("delta must lie in [0, 2046], got " + std::to_string(delta));
  }
}

DatasetKind dataset_kind(int id) {
  if (id < 1 || id > 4) throw InvalidSpec("dataset kind must be 1..4, got " + std::to_string(id));
  return static_cast<DatasetKind>(id);
}

std::vector<double> generate(const DatasetSpec& spec) {
  spec.validate();
  BaseValues base(spec);
  std::vector<double> out;
  out.reserve(spec.n);
  switch (spec.kind) {
    case DatasetKind::Positive:
      for (std::uint64_t i = 0; i < spec.n; ++i) out.push_back(base.positive());
      break;
    case DatasetKind::Mixed:
      for (std::uint64_t i = 0; i < spec.n; ++i) out.push_back(base.mixed());
      break;
    case DatasetKind::AndersonIll: {
      DenseAccumulator acc;
      for (std::uint64_t i = 0; i < spec.n; ++i) {
        out.push_back(base.mixed());
        acc.add_scalar(out.back());
      }
      bool negative = false;
      const detail::BigUnsigned total = detail::magnitude_of(acc, &negative);
      double mean = 0.0;
      if (!total.is_zero()) {
        mean = detail::round_quotient(total, detail::BigUnsigned(spec.n), kMinBit, negative).value;
      }
      for (double& x : out) x -= mean;
      break;
    }
    case DatasetKind::SumZero: {
      const std::uint64_t half = spec.n / 2;
      for (std::uint64_t i = 0; i < half; ++i) out.push_back(base.mixed());
      for (std::uint64_t i = 0; i < half; ++i) out.push_back(-out[i]);
      for (std::uint64_t i = out.size(); i > 1; --i) {
        std::swap(out[i - 1], out[bounded(base.engine(), i)]);
      }
      if (spec.n % 2 != 0) out.push_back(0.0);
      break;
    }
  }
  return out;
}

}  // namespace ssum
