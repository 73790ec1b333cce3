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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ssum {

/// Pull-based source of binary64 values.
class ValueStream {
 public:
  virtual ~ValueStream() = default;
  /// Fills a prefix of `out`; returns how many values were written, 0 at
  /// end of input.
  virtual std::size_t read(std::span<double> out) = 0;
};

class SpanStream final : public ValueStream {
 public:
  explicit SpanStream(std::span<const double> values) : values_(values) {}
  std::size_t read(std::span<double> out) override;

 private:
  std::span<const double> values_;
  std::size_t pos_ = 0;
};

/// Raw little-endian binary64. A trailing partial value throws IoFailure.
class BinaryStream final : public ValueStream {
 public:
  explicit BinaryStream(std::istream& in, std::string name = "<binary input>");
  std::size_t read(std::span<double> out) override;

 private:
  std::istream& in_;
  std::string name_;
};

/// Decimal text, one value per line; blank lines are skipped. Accepts
/// "nan", "inf" and "-inf". A malformed line throws IoFailure.
class TextStream final : public ValueStream {
 public:
  explicit TextStream(std::istream& in, std::string name = "<text input>");
  std::size_t read(std::span<double> out) override;

 private:
  std::istream& in_;
  std::string name_;
  std::size_t line_ = 0;
};

std::vector<double> read_all(ValueStream& in);

void write_binary(std::ostream& out, std::span<const double> values);
/// Shortest round-trip decimal per line.
void write_text(std::ostream& out, std::span<const double> values);

}  // namespace ssum
