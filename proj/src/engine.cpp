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

#include <smcfdr/engine.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include <smcfdr/random.hpp>

namespace smcfdr {

std::string to_string(ResampleMode mode) {
  return mode == ResampleMode::kEveryStep ? "every_step" : "ess_triggered";
}

ResampleMode resample_mode_from_string(const std::string& text) {
  if (text == "every_step") {
    return ResampleMode::kEveryStep;
  }
  if (text == "ess_triggered") {
    return ResampleMode::kEssTriggered;
  }
  throw ContractViolation("unknown resample mode '" + text + "'");
}

void EngineConfig::validate() const {
  const auto require = [](bool ok, const char* what) {
    if (!ok) {
      throw ContractViolation(fmt::format("invalid engine config: {}", what));
    }
  };
  require(particles >= 2, "particles must be at least 2");
  require(n0_init >= 0.0 && n1_init >= 0.0, "initial counters must be nonnegative");
  require(k_init >= 1, "k_init must be at least 1");
  require(std::isfinite(mu1_init), "mu1_init must be finite");
  require(sigma1_init > 0.0 && std::isfinite(sigma1_init), "sigma1_init must be positive");
  require(sigma0_init > 0.0 && std::isfinite(sigma0_init), "sigma0_init must be positive");
  require(std::isfinite(mu0_fixed), "mu0_fixed must be finite");
  require(std::isfinite(beta_prior_lo) && std::isfinite(beta_prior_hi) && beta_prior_lo < beta_prior_hi,
          "beta prior box must satisfy lo < hi");
  require(ness_reinit_threshold > 0.0 && ness_reinit_threshold < 1.0, "ness_reinit_threshold must lie in (0, 1)");
  require(decision_threshold > 0.0 && decision_threshold < 1.0, "decision_threshold must lie in (0, 1)");
  require(ess_resample_threshold > 0.0 && ess_resample_threshold <= 1.0, "ess_resample_threshold must lie in (0, 1]");
  require(workers >= 1, "workers must be at least 1");
  rejuvenation.validate();
}

ParticleSystem initialize(const EngineConfig& cfg, std::size_t covariate_dim, const PosteriorSnapshot* warm_start,
                          std::uint64_t step) {
  cfg.validate();
  std::vector<Particle> particles;
  particles.reserve(cfg.particles);

  if (warm_start != nullptr) {
    if (warm_start->particles.empty()) {
      throw ContractViolation("warm-start snapshot holds no particles");
    }
    if (warm_start->covariate_dim != covariate_dim) {
      throw ContractViolation(fmt::format("warm-start snapshot has {} covariates, run expects {}",
                                          warm_start->covariate_dim, covariate_dim));
    }
    const std::size_t n = warm_start->particles.size();
    std::vector<double> cumulative(n);
    if (warm_start->log_weights.size() == n) {
      const double top = *std::max_element(warm_start->log_weights.begin(), warm_start->log_weights.end());
      std::transform(warm_start->log_weights.begin(), warm_start->log_weights.end(), cumulative.begin(),
                     [top](double lw) { return std::exp(lw - top); });
    } else {
      std::fill(cumulative.begin(), cumulative.end(), 1.0);
    }
    std::partial_sum(cumulative.begin(), cumulative.end(), cumulative.begin());
    RandomStream rng(cfg.seed, step, StreamTag::kWarmStart, 0);
    for (std::size_t m = 0; m < cfg.particles; ++m) {
      const double u = rng.uniform() * cumulative.back();
      const auto pick = std::min<std::size_t>(
          static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin()),
          n - 1);
      particles.push_back(warm_start->particles[pick]);
    }
    return ParticleSystem(std::move(particles));
  }

  std::vector<MixtureComponent> comps(cfg.k_init, MixtureComponent{1.0 / static_cast<double>(cfg.k_init),
                                                                   cfg.mu1_init, cfg.sigma1_init});
  const AlternativeModel alt(std::move(comps));
  const NullModel null_model(cfg.mu0_fixed, cfg.sigma0_init);
  for (std::size_t m = 0; m < cfg.particles; ++m) {
    RandomStream rng(cfg.seed, step, StreamTag::kInitialize, m);
    RegressionCoefficients beta(covariate_dim + 1);
    for (double& b : beta) {
      b = rng.uniform(cfg.beta_prior_lo, cfg.beta_prior_hi);
    }
    particles.push_back(Particle{ModelParams{std::move(beta), null_model, alt}, cfg.n0_init, cfg.n1_init});
  }
  return ParticleSystem(std::move(particles));
}

Engine::Engine(EngineConfig cfg, std::size_t covariate_dim, const PosteriorSnapshot* warm_start)
    : cfg_(std::move(cfg)), dim_(covariate_dim), pool_(cfg_.workers) {
  cfg_.validate();
  if (warm_start != nullptr) {
    step_offset_ = warm_start->steps;
  }
  ps_ = initialize(cfg_, dim_, warm_start, step_offset_);
}

void Engine::move_cloud(const TestRecord& previous, std::uint64_t step) {
  bool resampled = false;
  if (cfg_.resample_mode == ResampleMode::kEveryStep || last_ness_ < cfg_.ess_resample_threshold) {
    residual_resample(ps_, cfg_.seed, step);
    resampled = true;
  }
  if (cfg_.rejuvenate_mixture) {
    const auto& rej = cfg_.rejuvenation;
    pool_.for_each_index(ps_.size(), [&](std::size_t m) {
      Particle& p = ps_[m];
      if (allocate(p, previous, rej, cfg_.convolve) == Allocation::kNull) {
        update_null(p, previous.z, rej, cfg_.update_null_mean);
      } else {
        update_alternative(p, previous.z, rej);
      }
    });
  }
  if (resampled) {
    kernel_refresh_betas(ps_, cfg_.seed, step, pool_);
  }
}

const TraceEntry& Engine::step(const TestRecord& rec) {
  if (rec.x.size() != dim_) {
    throw ContractViolation(
        fmt::format("record {} has {} covariates, engine expects {}", rec.index, rec.x.size(), dim_));
  }
  if (!std::isfinite(rec.z)) {
    throw ContractViolation(fmt::format("record {} has a non-finite statistic", rec.index));
  }
  const std::uint64_t t = steps_ + 1;
  if (steps_ > 0) {
    move_cloud(records_.back(), step_offset_ + steps_);
  }

  TraceEntry entry;
  entry.t = t;
  double ness = 0.0;
  bool degenerate = false;
  try {
    reweight(ps_, rec, pool_, cfg_.convolve);
    ness = ess(ps_).ness;
  } catch (const DegenerateSystemError&) {
    degenerate = true;
  }
  entry.ness = ness;
  last_ness_ = ness;
  if (degenerate || ness < cfg_.ness_reinit_threshold) {
    entry.reinit = true;
    entry.trigger_ness = ness;
    entry.ness = 1.0;
    ++reinits_;
    ps_ = initialize(cfg_, dim_, nullptr, step_offset_ + t);
    try {
      reweight(ps_, rec, pool_, cfg_.convolve);
    } catch (const DegenerateSystemError&) {
      ps_.set_uniform_weights();
    }
    last_ness_ = ess(ps_).ness;
  }

  const Particle& map = map_particle();
  entry.map_beta = map.params.beta;
  entry.map_k = map.params.alt.size();
  entry.map_sigma0 = map.params.null_model.sigma();
  if (cfg_.streaming_decisions) {
    entry.provisional = decide(map.params, std::span(&rec, 1), cfg_.decision_threshold, cfg_.convolve).front();
  }

  records_.push_back(rec);
  steps_ = t;
  trace_.push_back(std::move(entry));
  return trace_.back();
}

const Particle& Engine::map_particle() const { return ps_[ps_.argmax_weight()]; }

std::vector<double> Engine::weighted_beta_mean() const {
  std::vector<double> mean(dim_ + 1, 0.0);
  const auto w = ps_.weights();
  for (std::size_t m = 0; m < ps_.size(); ++m) {
    for (std::size_t j = 0; j < mean.size(); ++j) {
      mean[j] += w[m] * ps_[m].params.beta[j];
    }
  }
  return mean;
}

std::vector<DecisionRecord> Engine::finalize_decisions() const {
  return decide(map_particle().params, records_, cfg_.decision_threshold, cfg_.convolve);
}

PosteriorSnapshot Engine::snapshot() const {
  PosteriorSnapshot snap;
  snap.config = cfg_;
  snap.covariate_dim = dim_;
  snap.steps = step_offset_ + steps_;
  snap.particles.assign(ps_.particles().begin(), ps_.particles().end());
  snap.log_weights.assign(ps_.log_weights().begin(), ps_.log_weights().end());
  return snap;
}

std::vector<DecisionRecord> decide(const ModelParams& params, std::span<const TestRecord> records, double threshold,
                                   bool convolve) {
  std::vector<DecisionRecord> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    const double prob = posterior_signal_prob(params, rec, convolve);
    out.push_back(DecisionRecord{rec.index, prob, prob > threshold ? 1 : 0});
  }
  return out;
}

double ConfusionTable::fdr() const noexcept {
  return static_cast<double>(null_declared_alt) / static_cast<double>(std::max<std::size_t>(1, declared_alt()));
}

double ConfusionTable::power() const noexcept {
  return static_cast<double>(alt_declared_alt) / static_cast<double>(std::max<std::size_t>(1, true_alt()));
}

ConfusionTable confusion(std::span<const DecisionRecord> decisions, std::span<const int> truths) {
  if (decisions.size() != truths.size()) {
    throw ContractViolation(
        fmt::format("{} decisions but {} truth labels", decisions.size(), truths.size()));
  }
  ConfusionTable table;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const bool alt = truths[i] != 0;
    const bool declared = decisions[i].declared != 0;
    if (!alt && !declared) {
      ++table.null_declared_null;
    } else if (!alt) {
      ++table.null_declared_alt;
    } else if (!declared) {
      ++table.alt_declared_null;
    } else {
      ++table.alt_declared_alt;
    }
  }
  return table;
}

}  // namespace smcfdr
