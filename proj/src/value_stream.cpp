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

#include "ssum/value_stream.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string_view>
#include <utility>

#include "ssum/errors.hpp"
#include "ssum/rounded_sum.hpp"

namespace ssum {
namespace {

std::uint64_t load_le64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::size_t SpanStream::read(std::span<double> out) {
  const std::size_t count = std::min(out.size(), values_.size() - pos_);
  std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(pos_), count, out.begin());
  pos_ += count;
  return count;
}

BinaryStream::BinaryStream(std::istream& in, std::string name)
    : in_(in), name_(std::move(name)) {}

std::size_t BinaryStream::read(std::span<double> out) {
  if (out.empty()) return 0;
  std::vector<unsigned char> raw(out.size() * 8);
  in_.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (in_.bad()) throw IoFailure(name_, IoOp::Read);
  if (got % 8 != 0) throw IoFailure(name_, IoOp::Read, "length is not a multiple of 8 bytes");
  const std::size_t count = got / 8;
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::bit_cast<double>(load_le64(raw.data() + 8 * i));
  }
  return count;
}

TextStream::TextStream(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

std::size_t TextStream::read(std::span<double> out) {
  std::size_t count = 0;
  std::string line;
  while (count < out.size() && std::getline(in_, line)) {
    ++line_;
    const std::string_view token = trim(line);
    if (token.empty()) continue;
    double v = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
      throw IoFailure(name_, IoOp::Read,
                      "line " + std::to_string(line_) + ": not a number: " + std::string(token));
    }
    out[count++] = v;
  }
  if (in_.bad()) throw IoFailure(name_, IoOp::Read);
  return count;
}

std::vector<double> read_all(ValueStream& in) {
  std::vector<double> values;
  std::vector<double> buffer(1 << 14);
  while (const std::size_t got = in.read(buffer)) {
    values.insert(values.end(), buffer.begin(), buffer.begin() + static_cast<std::ptrdiff_t>(got));
  }
  return values;
}

void write_binary(std::ostream& out, std::span<const double> values) {
  std::vector<unsigned char> raw(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) raw[8 * i + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

void write_text(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << shortest_decimal(v) << '\n';
}

}  // namespace ssum
