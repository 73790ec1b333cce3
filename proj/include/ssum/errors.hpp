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

#include <filesystem>
#include <stdexcept>
#include <string>

namespace ssum {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A NaN or infinity reached an engine running with NonFinitePolicy::Reject.
class NonFiniteInput : public Error {
 public:
  explicit NonFiniteInput(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Two accumulators built with different digit widths were combined.
class ConfigMismatch : public Error {
 public:
  ConfigMismatch(int lhs_width, int rhs_width);
};

/// A carry left the top digit of a dense accumulator.
class CapacityOverflow : public Error {
 public:
  using Error::Error;
};

/// An operation that requires regularized digits saw a raw digit.
class NotRegularized : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(long long index, long long limit);
};

class EmptyAccumulator : public Error {
 public:
  using Error::Error;
};

enum class IoOp { Open, Read, Write, Remove };

class IoFailure : public Error {
 public:
  IoFailure(std::filesystem::path path, IoOp op, const std::string& detail = {});
  const std::filesystem::path& path() const noexcept { return path_; }
  IoOp op() const noexcept { return op_; }

 private:
  std::filesystem::path path_;
  IoOp op_;
};

class BudgetTooSmall : public Error {
 public:
  using Error::Error;
};

enum class DecodeErrorKind {
  BadMagic,
  BadVersion,
  WidthMismatch,
  Truncated,
  UnsortedIndices,
  MantissaOutOfRange,
  /// A record index outside the digit range of the configuration.
  BadIndex,
  /// Bytes left over after the announced record count.
  TrailingBytes,
};

class DecodeError : public Error {
 public:
  DecodeError(DecodeErrorKind kind, const std::string& detail);
  DecodeErrorKind kind() const noexcept { return kind_; }

 private:
  DecodeErrorKind kind_;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

}  // namespace ssum
