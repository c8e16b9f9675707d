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

#ifndef SMCFDR_RANDOM_HPP
#define SMCFDR_RANDOM_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace smcfdr {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure: same key and counter, same output.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) noexcept;

/// Identifies which stochastic operation a stream belongs to.
enum class StreamTag : std::uint8_t {
  kInitialize = 1,
  kResample = 2,
  kKernel = 3,
  kWarmStart = 4,
  kGenerate = 5,
  kTest = 6,
};

/**
 * Counter-based random stream keyed by (seed, step, tag, index).
 *
 * Two streams with the same key produce the same sequence regardless of how
 * many other streams were consumed before, so per-particle work can be split
 * across any number of workers without changing results.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class RandomStream {
 public:
  using result_type = std::uint32_t;

  RandomStream(std::uint64_t seed, std::uint64_t step, StreamTag tag, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept;

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() noexcept;

  double normal(double mu, double sigma) noexcept { return mu + sigma * normal(); }

  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace smcfdr

#endif  // SMCFDR_RANDOM_HPP
