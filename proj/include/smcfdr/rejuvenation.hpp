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

#ifndef SMCFDR_REJUVENATION_HPP
#define SMCFDR_REJUVENATION_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include <smcfdr/model.hpp>
#include <smcfdr/parallel.hpp>
#include <smcfdr/particles.hpp>

/**
 * \file
 * \brief Post-resampling particle moves.
 *
 * The mixture part of each particle (null and alternative) is moved by an
 * online, count-controlled Gaussian mixture update driven by the current
 * record. The regression coefficients are moved by shrinkage kernel
 * smoothing around the cloud mean.
 */

namespace smcfdr {

/// What decides whether a record updates a particle's null or its alternative.
enum class AllocationRule {
  kPrior,      ///< prior signal probability c(x); ignores z
  kPosterior,  ///< posterior signal probability p(h = 1 | z, x) under the particle
};

std::string to_string(AllocationRule rule);
AllocationRule allocation_rule_from_string(const std::string& text);

struct RejuvenationConfig {
  double match_threshold = 2.5;                      ///< in component standard deviations
  double new_component_sigma = std::sqrt(20.0);      ///< sigma of a freshly spawned component
  AllocationRule allocation_rule = AllocationRule::kPrior;
  double allocation_threshold = 0.5;                 ///< probability at or above this goes to the alternative
  bool variance_update_uses_old_mean = false;        ///< use the pre-update mean in the variance innovation
  double prune_threshold = 1e-6;                     ///< drop components lighter than this; 0 disables
  double min_sigma = 1e-6;

  void validate() const;
};

enum class Allocation { kNull, kAlternative };

/**
 * Sends a record to the particle's null or alternative.
 *
 * Under the default prior rule only c(x) matters, so the outcome is the same
 * for every z. \p convolve selects the alternative density mode used by the
 * posterior rule.
 */
Allocation allocate(const Particle& particle, const TestRecord& rec, const RejuvenationConfig& cfg = {},
                    bool convolve = false);

/**
 * Learning-rate update of the null with weight alpha0 = 1 / (1 + n0).
 *
 * With \p update_mean false the null mean stays fixed and only the scale moves.
 */
void update_null(Particle& particle, double z, const RejuvenationConfig& cfg = {}, bool update_mean = true);

/// Match-or-spawn update of the alternative mixture with weight alpha1 = 1 / (1 + n1).
void update_alternative(Particle& particle, double z, const RejuvenationConfig& cfg = {});

/// Index of the first component within match_threshold standard deviations of z, or size() if none.
std::size_t find_match(const AlternativeModel& alt, double z, double threshold);

struct KernelSmoothingState {
  std::size_t d = 0;
  double a = 1.0;  ///< shrinkage
  double b = 0.0;  ///< bandwidth
  Eigen::MatrixXd covariance;
  Eigen::VectorXd mean;
};

/// Shrinkage a and bandwidth b for dimension \p d and \p m particles; a^2 + b^2 = 1.
struct KernelBandwidth {
  double a;
  double b;
};
KernelBandwidth kernel_bandwidth(std::size_t d, std::size_t m);

/// Monte Carlo mean and covariance (divisor M) of the particles' coefficient vectors.
KernelSmoothingState kernel_moments(const ParticleSystem& ps);

/**
 * Redraws every particle's coefficients from N(a beta_m + (1 - a) mean, b^2 Q).
 *
 * Assumes uniform weights (called after resampling). Draws use the stream
 * (seed, step, kKernel, m) so the result is independent of worker count.
 */
KernelSmoothingState kernel_refresh_betas(ParticleSystem& ps, std::uint64_t seed, std::uint64_t step,
                                          const WorkerPool& pool);

}  // namespace smcfdr

#endif  // SMCFDR_REJUVENATION_HPP
