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

#ifndef SMCFDR_ENGINE_HPP
#define SMCFDR_ENGINE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <smcfdr/model.hpp>
#include <smcfdr/parallel.hpp>
#include <smcfdr/particles.hpp>
#include <smcfdr/rejuvenation.hpp>

namespace smcfdr {

enum class ResampleMode { kEveryStep, kEssTriggered };

std::string to_string(ResampleMode mode);
ResampleMode resample_mode_from_string(const std::string& text);

/// Tunables of the sampler. Defaults reproduce the reference synthetic setting.
struct EngineConfig {
  std::size_t particles = 10000;
  double n0_init = 9.0;
  double n1_init = 1.0;
  std::size_t k_init = 1;
  double mu1_init = 3.0;
  double sigma1_init = std::sqrt(20.0);
  double sigma0_init = 1.5;
  double mu0_fixed = 0.0;
  double beta_prior_lo = -10.0;  ///< uniform box per coefficient
  double beta_prior_hi = 10.0;
  double ness_reinit_threshold = 0.1;
  double decision_threshold = 0.5;
  ResampleMode resample_mode = ResampleMode::kEveryStep;
  double ess_resample_threshold = 0.5;  ///< only used by kEssTriggered
  bool update_null_mean = false;
  bool rejuvenate_mixture = true;  ///< false freezes null and alternative at their initial values
  bool convolve = false;           ///< density mode of the alternative
  bool streaming_decisions = false;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  RejuvenationConfig rejuvenation;

  void validate() const;
};

/// Per-record posterior decision.
struct DecisionRecord {
  std::size_t index = 0;
  double posterior_prob = 0.0;
  int declared = 0;
};

/// One row of the run trace.
struct TraceEntry {
  std::size_t t = 0;          ///< 1-based step
  double ness = 1.0;          ///< after weighting; 1 on a re-initialization step (fresh uniform cloud)
  std::vector<double> map_beta;
  std::size_t map_k = 0;
  double map_sigma0 = 0.0;
  bool reinit = false;
  double trigger_ness = 1.0;  ///< NESS that caused the re-initialization (0 for a degenerate system)
  std::optional<DecisionRecord> provisional;
};

using RunTrace = std::vector<TraceEntry>;

/// Particle cloud state that can seed a later run.
struct PosteriorSnapshot {
  static constexpr const char* kSchema = "smcfdr.snapshot/1";

  EngineConfig config;
  std::size_t covariate_dim = 0;
  std::uint64_t steps = 0;  ///< records consumed; with the seed this is the full RNG state
  std::vector<Particle> particles;
  std::vector<double> log_weights;
};

/**
 * Streaming sampler over the two-groups model.
 *
 * Each call to step() consumes one record: the record is used to weight the
 * cloud, and is then used to move the cloud at the start of the following
 * step (resample, mixture update, kernel refresh). Deferring the move keeps
 * the post-weighting weights available for the final decision pass.
 */
class Engine {
 public:
  Engine(EngineConfig cfg, std::size_t covariate_dim, const PosteriorSnapshot* warm_start = nullptr);

  const TraceEntry& step(const TestRecord& rec);

  /// Posterior signal probabilities of every consumed record under the highest-weight particle.
  [[nodiscard]] std::vector<DecisionRecord> finalize_decisions() const;

  /// Highest-weight particle of the current (post-weighting) cloud.
  [[nodiscard]] const Particle& map_particle() const;

  /// Weighted mean of the regression coefficients.
  [[nodiscard]] std::vector<double> weighted_beta_mean() const;

  [[nodiscard]] const ParticleSystem& system() const noexcept { return ps_; }
  [[nodiscard]] const RunTrace& trace() const noexcept { return trace_; }
  [[nodiscard]] const EngineConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] std::size_t covariate_dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
  [[nodiscard]] std::size_t reinit_count() const noexcept { return reinits_; }
  [[nodiscard]] std::span<const TestRecord> records() const noexcept { return records_; }

  [[nodiscard]] PosteriorSnapshot snapshot() const;

 private:
  void move_cloud(const TestRecord& previous, std::uint64_t step);

  EngineConfig cfg_;
  std::size_t dim_;
  WorkerPool pool_;
  ParticleSystem ps_;
  RunTrace trace_;
  std::vector<TestRecord> records_;
  std::uint64_t steps_ = 0;
  std::uint64_t step_offset_ = 0;  ///< steps already consumed by a warm-start source
  std::size_t reinits_ = 0;
  double last_ness_ = 1.0;
};

/// Fresh cloud from the diffuse prior, or resampled from a snapshot. Uses the stream (seed, step, kInitialize, m).
ParticleSystem initialize(const EngineConfig& cfg, std::size_t covariate_dim, const PosteriorSnapshot* warm_start,
                          std::uint64_t step);

/// Posterior signal probability of each record under \p params, thresholded.
std::vector<DecisionRecord> decide(const ModelParams& params, std::span<const TestRecord> records, double threshold,
                                   bool convolve = false);

/// 2x2 table of truth against declaration.
struct ConfusionTable {
  std::size_t null_declared_null = 0;
  std::size_t null_declared_alt = 0;
  std::size_t alt_declared_null = 0;
  std::size_t alt_declared_alt = 0;

  [[nodiscard]] std::size_t declared_alt() const noexcept { return null_declared_alt + alt_declared_alt; }
  [[nodiscard]] std::size_t true_alt() const noexcept { return alt_declared_null + alt_declared_alt; }
  [[nodiscard]] std::size_t total() const noexcept {
    return null_declared_null + null_declared_alt + alt_declared_null + alt_declared_alt;
  }
  /// FP / max(1, FP + TP).
  [[nodiscard]] double fdr() const noexcept;
  /// TP / max(1, true alternatives).
  [[nodiscard]] double power() const noexcept;
};

ConfusionTable confusion(std::span<const DecisionRecord> decisions, std::span<const int> truths);

}  // namespace smcfdr

#endif  // SMCFDR_ENGINE_HPP
