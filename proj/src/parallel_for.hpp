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

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ssum::detail {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Threads pull
/// indices from a shared counter; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
  }
  if (error) std::rethrow_exception(error);
}

/// Pairwise bottom-up reduction of `nodes` in place; nodes[0] holds the
/// root afterwards. Pairing is fixed by position, so the tree shape does
/// not depend on scheduling.
template <typename T, typename Combine>
void tree_reduce(std::vector<T>& nodes, std::size_t workers, Combine&& combine) {
  while (nodes.size() > 1) {
    const std::size_t pairs = nodes.size() / 2;
    std::vector<T> next(pairs + nodes.size() % 2);
    parallel_for(pairs, workers,
                 [&](std::size_t i) { next[i] = combine(nodes[2 * i], nodes[2 * i + 1]); });
    if (nodes.size() % 2 != 0) next.back() = std::move(nodes.back());
    nodes = std::move(next);
  }
}

}  // namespace ssum::detail
