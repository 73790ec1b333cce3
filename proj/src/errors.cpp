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

#include "ssum/errors.hpp"

#include <sstream>
#include <string_view>
#include <utility>

namespace ssum {
namespace {

std::string describe(double value) {
  std::ostringstream os;
  os << "non-finite input value " << value;
  return os.str();
}

std::string_view op_name(IoOp op) {
  switch (op) {
    case IoOp::Open:
      return "open";
    case IoOp::Read:
      return "read";
    case IoOp::Write:
      return "write";
    case IoOp::Remove:
      return "remove";
  }
  return "access";
}

}  // namespace

NonFiniteInput::NonFiniteInput(double value) : Error(describe(value)), value_(value) {}

ConfigMismatch::ConfigMismatch(int lhs_width, int rhs_width)
    : Error("digit width mismatch: " + std::to_string(lhs_width) + " vs " +
            std::to_string(rhs_width)) {}

IndexOutOfRange::IndexOutOfRange(long long index, long long limit)
    : Error("digit index " + std::to_string(index) + " outside [0, " +
            std::to_string(limit) + ")") {}

IoFailure::IoFailure(std::filesystem::path path, IoOp op, const std::string& detail)
    : Error("failed to " + std::string(op_name(op)) + " " + path.string() +
            (detail.empty() ? std::string() : ": " + detail)),
      path_(std::move(path)),
      op_(op) {}

DecodeError::DecodeError(DecodeErrorKind kind, const std::string& detail)
    : Error("decode error: " + detail), kind_(kind) {}

}  // namespace ssum
