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

#include <smcfdr/particles.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <smcfdr/random.hpp>

namespace smcfdr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

ParticleSystem::ParticleSystem(std::vector<Particle> particles) : particles_(std::move(particles)) {
  if (particles_.size() < 2) {
    throw ContractViolation("a particle system needs at least two particles");
  }
  set_uniform_weights();
}

std::vector<double> ParticleSystem::weights() const {
  std::vector<double> w(log_weights_.size());
  std::transform(log_weights_.begin(), log_weights_.end(), w.begin(), [](double lw) { return std::exp(lw); });
  return w;
}

void ParticleSystem::set_log_weights(std::vector<double> log_weights) {
  if (log_weights.size() != particles_.size()) {
    throw ContractViolation("log-weight vector length differs from particle count");
  }
  double max_lw = kNegInf;
  for (double lw : log_weights) {
    if (!std::isnan(lw)) {
      max_lw = std::max(max_lw, lw);
    }
  }
  if (max_lw == kNegInf) {
    throw DegenerateSystemError("all particle weights are zero");
  }
  double total = 0.0;
  for (double& lw : log_weights) {
    if (std::isnan(lw)) {
      lw = kNegInf;
    }
    lw -= max_lw;
    total += std::exp(lw);
  }
  const double log_total = std::log(total);
  for (double& lw : log_weights) {
    lw -= log_total;
  }
  log_weights_ = std::move(log_weights);
}

void ParticleSystem::set_uniform_weights() {
  log_weights_.assign(particles_.size(), -std::log(static_cast<double>(particles_.size())));
}

std::size_t ParticleSystem::argmax_weight() const noexcept {
  return static_cast<std::size_t>(std::distance(log_weights_.begin(),
                                                std::max_element(log_weights_.begin(), log_weights_.end())));
}

void ParticleSystem::select(std::span<const std::size_t> ancestors) {
  if (ancestors.size() != particles_.size()) {
    throw ContractViolation("resampling must preserve the particle count");
  }
  std::vector<Particle> next;
  next.reserve(ancestors.size());
  for (std::size_t a : ancestors) {
    next.push_back(particles_.at(a));
  }
  particles_ = std::move(next);
  set_uniform_weights();
}

std::vector<double> reweight(ParticleSystem& ps, const TestRecord& rec, const WorkerPool& pool, bool convolve) {
  const std::size_t m = ps.size();
  std::vector<double> log_lik(m);
  pool.for_each_index(m, [&](std::size_t i) { log_lik[i] = log_marginal_likelihood(ps[i].params, rec, convolve); });

  std::vector<double> log_weights(ps.log_weights().begin(), ps.log_weights().end());
  double best = kNegInf;
  for (std::size_t i = 0; i < m; ++i) {
    if (log_weights[i] != kNegInf && !std::isnan(log_lik[i])) {
      best = std::max(best, log_lik[i]);
    }
    log_weights[i] += log_lik[i];
  }
  if (!(best >= kLogUnderflow)) {
    throw DegenerateSystemError("every particle assigns zero likelihood to record " + std::to_string(rec.index));
  }
  ps.set_log_weights(std::move(log_weights));
  return log_lik;
}

EssReport ess(std::span<const double> weights) {
  double sum_sq = 0.0;
  for (double w : weights) {
    sum_sq += w * w;
  }
  const double m = static_cast<double>(weights.size());
  const double value = std::clamp(1.0 / sum_sq, 1.0, m);
  return {value, value / m};
}

EssReport ess(const ParticleSystem& ps) { return ess(ps.weights()); }

ResidualCounts residual_counts(std::span<const double> weights, std::uint64_t seed, std::uint64_t step) {
  const std::size_t m = weights.size();
  const double scale = static_cast<double>(m);
  ResidualCounts out{std::vector<std::size_t>(m), {}};
  std::vector<double> residual(m);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double expected = scale * weights[i];
    const double whole = std::floor(expected);
    out.deterministic[i] = static_cast<std::size_t>(whole);
    residual[i] = expected - whole;
    assigned += out.deterministic[i];
  }
  // Guard against weights summing marginally above one.
  while (assigned > m) {
    const auto it = std::max_element(out.deterministic.begin(), out.deterministic.end());
    --*it;
    --assigned;
  }
  out.total = out.deterministic;

  const std::size_t remaining = m - assigned;
  if (remaining == 0) {
    return out;
  }
  std::vector<double> cumulative(m);
  std::partial_sum(residual.begin(), residual.end(), cumulative.begin());
  const double total_residual = cumulative.back();
  RandomStream rng(seed, step, StreamTag::kResample, 0);
  for (std::size_t r = 0; r < remaining; ++r) {
    std::size_t pick;
    if (total_residual > 0.0) {
      const double u = rng.uniform() * total_residual;
      pick = static_cast<std::size_t>(std::distance(
          cumulative.begin(), std::upper_bound(cumulative.begin(), cumulative.end(), u)));
      pick = std::min(pick, m - 1);
    } else {
      pick = static_cast<std::size_t>(std::distance(weights.begin(), std::max_element(weights.begin(), weights.end())));
    }
    ++out.total[pick];
  }
  return out;
}

std::vector<std::size_t> ancestors_from_counts(std::span<const std::size_t> counts) {
  std::vector<std::size_t> ancestors;
  ancestors.reserve(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    ancestors.insert(ancestors.end(), counts[i], i);
  }
  return ancestors;
}

void residual_resample(ParticleSystem& ps, std::uint64_t seed, std::uint64_t step) {
  const auto counts = residual_counts(ps.weights(), seed, step);
  ps.select(ancestors_from_counts(counts.total));
}

}  // namespace smcfdr
