// Copyright 2026 The SLID Authors
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

#ifndef SLID_SRC_PARALLEL_H_
#define SLID_SRC_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace slid::internal {

// Runs fn(worker, begin, end) over `workers` contiguous chunks of [0, n).
// Chunk k is [k*n/w, (k+1)*n/w); worker 0 runs on the calling thread. The
// first exception (in worker order) is rethrown after all workers finish.
template <typename Fn>
void ForEachChunk(std::size_t n, int workers, const Fn& fn) {
  const std::size_t w = std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)),
                               n));
  if (w == 1) {
    fn(0, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(w);
  for (std::size_t k = 1; k < w; ++k) {
    threads.emplace_back([&, k] {
      try {
        fn(static_cast<int>(k), k * n / w, (k + 1) * n / w);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  try {
    fn(0, std::size_t{0}, n / w);
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Number of workers ForEachChunk actually uses.
inline int EffectiveWorkers(std::size_t n, int workers) {
  return static_cast<int>(std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)),
                               n)));
}

}  // namespace slid::internal

#endif  // SLID_SRC_PARALLEL_H_
