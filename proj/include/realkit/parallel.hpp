// Copyright 2026 The realkit Authors
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

#ifndef REALKIT_PARALLEL_HPP_
#define REALKIT_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace realkit {

/// Worker count: REALKIT_THREADS if set to a positive integer, otherwise the
/// machine's hardware concurrency.
inline int worker_threads() {
  if (const char* env = std::getenv("REALKIT_THREADS")) {
    try {
      int value = std::stoi(env);
      if (value > 0) return value;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs task(k) for k in [0, count). Tasks write into their own slots, so
/// callers merge results in index order and stay schedule-independent.
template <typename Task>
void parallel_for(int count, Task&& task) {
  const int threads = std::min(worker_threads(), count);
  if (threads <= 1) {
    for (int k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int k = next++; k < count; k = next++) task(k);
    });
  for (auto& thread : pool) thread.join();
}

}  // namespace realkit

#endif  // REALKIT_PARALLEL_HPP_
