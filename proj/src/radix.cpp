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

#include "ssum/radix.hpp"

#include <stdexcept>
#include <string>

namespace ssum {

RadixConfig::RadixConfig(int width) : width_(width) {
  if (width < kMinWidth || width > kMaxWidth) {
    throw std::invalid_argument("digit width " + std::to_string(width) +
                                " outside [2, 60]");
  }
}

}  // namespace ssum
