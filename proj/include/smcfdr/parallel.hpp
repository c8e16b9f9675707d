// Copyright 2026 The smcfdr Authors.
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

#ifndef SMCFDR_PARALLEL_HPP
#define SMCFDR_PARALLEL_HPP

#include <cstddef>
#include <memory>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace smcfdr {

/**
 * Fixed-size worker pool for per-particle loops.
 *
 * Only index-parallel loops whose iterations are independent go through here;
 * every reduction stays serial in index order, so results do not depend on the
 * worker count.
 */
class WorkerPool {
 public:
  /// \p workers == 0 picks the hardware default.
  explicit WorkerPool(std::size_t workers = 1)
      : workers_(workers == 0 ? static_cast<std::size_t>(tbb::this_task_arena::max_concurrency()) : workers),
        arena_(std::make_unique<tbb::task_arena>(static_cast<int>(workers_))) {}

  [[nodiscard]] std::size_t workers() const noexcept { return workers_; }

  template <class Fn>
  void for_each_index(std::size_t n, Fn&& fn) const {
    if (workers_ <= 1 || n < 2) {
      for (std::size_t i = 0; i < n; ++i) {
        fn(i);
      }
      return;
    }
    arena_->execute([&] {
      tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n, 256), [&](const tbb::blocked_range<std::size_t>& r) {
        for (std::size_t i = r.begin(); i != r.end(); ++i) {
          fn(i);
        }
      });
    });
  }

 private:
  std::size_t workers_;
  std::unique_ptr<tbb::task_arena> arena_;
};

}  // namespace smcfdr

#endif  // SMCFDR_PARALLEL_HPP
