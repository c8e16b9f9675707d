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

#ifndef SMCFDR_PARTICLES_HPP
#define SMCFDR_PARTICLES_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <smcfdr/model.hpp>
#include <smcfdr/parallel.hpp>

namespace smcfdr {

/// One hypothesis about the model parameters plus its allocation counters.
struct Particle {
  ModelParams params;
  double n0 = 0.0;  ///< records allocated to the null so far
  double n1 = 0.0;  ///< records allocated to the alternative so far
};

/// Raised when every particle assigns zero likelihood to a record.
class DegenerateSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EssReport {
  double ess;
  double ness;
};

/**
 * Weighted particle cloud.
 *
 * Weights are held as normalized log-weights; linear weights are derived on demand.
 */
class ParticleSystem {
 public:
  ParticleSystem() = default;
  explicit ParticleSystem(std::vector<Particle> particles);

  [[nodiscard]] std::size_t size() const noexcept { return particles_.size(); }
  [[nodiscard]] std::span<const Particle> particles() const noexcept { return particles_; }
  [[nodiscard]] std::span<Particle> particles() noexcept { return particles_; }
  [[nodiscard]] const Particle& operator[](std::size_t m) const { return particles_[m]; }
  [[nodiscard]] Particle& operator[](std::size_t m) { return particles_[m]; }

  [[nodiscard]] std::span<const double> log_weights() const noexcept { return log_weights_; }
  [[nodiscard]] std::vector<double> weights() const;

  /// Replaces the log-weights (any scale) and normalizes them. Throws DegenerateSystemError if all are -inf.
  void set_log_weights(std::vector<double> log_weights);

  void set_uniform_weights();

  /// Index of the largest weight; ties go to the lowest index.
  [[nodiscard]] std::size_t argmax_weight() const noexcept;

  /// Replaces the particle cloud by the given ancestors and resets to uniform weights.
  void select(std::span<const std::size_t> ancestors);

 private:
  std::vector<Particle> particles_;
  std::vector<double> log_weights_;
};

/// Log of the smallest positive normal double; a likelihood below this counts as zero.
inline const double kLogUnderflow = -708.0;

/**
 * Multiplies each weight by the particle's marginal likelihood of \p rec and renormalizes.
 *
 * Throws DegenerateSystemError when every particle's likelihood underflows to zero.
 * Returns the per-particle log-likelihoods.
 */
std::vector<double> reweight(ParticleSystem& ps, const TestRecord& rec, const WorkerPool& pool, bool convolve = false);

/// ESS = 1 / sum w^2 over normalized weights.
EssReport ess(std::span<const double> weights);
EssReport ess(const ParticleSystem& ps);

/// Per-particle copy counts from residual resampling.
struct ResidualCounts {
  std::vector<std::size_t> deterministic;  ///< floor(M w_m)
  std::vector<std::size_t> total;          ///< deterministic plus multinomial residual draws
};

/**
 * Residual resampling of \p weights (normalized, length M) into M offspring.
 *
 * Particle m receives floor(M w_m) copies deterministically; the remaining slots
 * are filled by multinomial draws proportional to the residuals M w_m - floor(M w_m).
 */
ResidualCounts residual_counts(std::span<const double> weights, std::uint64_t seed, std::uint64_t step);

/// Expands copy counts into an ancestor index list in particle order.
std::vector<std::size_t> ancestors_from_counts(std::span<const std::size_t> counts);

/// Resamples \p ps in place; output weights are uniform.
void residual_resample(ParticleSystem& ps, std::uint64_t seed, std::uint64_t step);

}  // namespace smcfdr

#endif  // SMCFDR_PARTICLES_HPP
