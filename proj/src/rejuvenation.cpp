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

#include <smcfdr/rejuvenation.hpp>

#include <algorithm>
#include <cmath>

#include <smcfdr/random.hpp>

namespace smcfdr {

void RejuvenationConfig::validate() const {
  if (!(match_threshold > 0.0)) {
    throw ContractViolation("match_threshold must be positive");
  }
  if (!(new_component_sigma > 0.0)) {
    throw ContractViolation("new_component_sigma must be positive");
  }
  if (!(allocation_threshold > 0.0 && allocation_threshold < 1.0)) {
    throw ContractViolation("allocation_threshold must lie in (0, 1)");
  }
  if (!(prune_threshold >= 0.0 && prune_threshold < 1.0)) {
    throw ContractViolation("prune_threshold must lie in [0, 1)");
  }
  if (!(min_sigma > 0.0)) {
    throw ContractViolation("min_sigma must be positive");
  }
}

std::string to_string(AllocationRule rule) { return rule == AllocationRule::kPrior ? "prior" : "posterior"; }

AllocationRule allocation_rule_from_string(const std::string& text) {
  if (text == "prior") {
    return AllocationRule::kPrior;
  }
  if (text == "posterior") {
    return AllocationRule::kPosterior;
  }
  throw ContractViolation("unknown allocation rule '" + text + "'");
}

Allocation allocate(const Particle& particle, const TestRecord& rec, const RejuvenationConfig& cfg, bool convolve) {
  const double p = cfg.allocation_rule == AllocationRule::kPrior
                       ? logistic_prior(particle.params.beta, rec.x)
                       : posterior_signal_prob(particle.params, rec, convolve);
  return p < cfg.allocation_threshold ? Allocation::kNull : Allocation::kAlternative;
}

void update_null(Particle& particle, double z, const RejuvenationConfig& cfg, bool update_mean) {
  NullModel& nm = particle.params.null_model;
  const double alpha = 1.0 / (1.0 + particle.n0);
  const double old_mu = nm.mu();
  const double new_mu = update_mean ? (1.0 - alpha) * old_mu + alpha * z : old_mu;
  const double centre = cfg.variance_update_uses_old_mean ? old_mu : new_mu;
  const double var = (1.0 - alpha) * nm.sigma() * nm.sigma() + alpha * (z - centre) * (z - centre);
  nm.set_mu(new_mu);
  nm.set_sigma(std::max(std::sqrt(var), cfg.min_sigma));
  particle.n0 += 1.0;
}

std::size_t find_match(const AlternativeModel& alt, double z, double threshold) {
  const auto comps = alt.components();
  for (std::size_t k = 0; k < comps.size(); ++k) {
    if (std::abs(z - comps[k].mu) <= threshold * comps[k].sigma) {
      return k;
    }
  }
  return comps.size();
}

void update_alternative(Particle& particle, double z, const RejuvenationConfig& cfg) {
  AlternativeModel& alt = particle.params.alt;
  auto& comps = alt.mutable_components();
  const double alpha = 1.0 / (1.0 + particle.n1);
  const std::size_t match = find_match(alt, z, cfg.match_threshold);

  if (match < comps.size()) {
    for (std::size_t k = 0; k < comps.size(); ++k) {
      comps[k].w = (1.0 - alpha) * comps[k].w + (k == match ? alpha : 0.0);
    }
    // rho reads the matched weight before renormalization.
    const double rho = alpha / (alpha + comps[match].w);
    alt.renormalize();

    MixtureComponent& c = comps[match];
    const double old_mu = c.mu;
    c.mu = (1.0 - rho) * old_mu + rho * z;
    const double centre = cfg.variance_update_uses_old_mean ? old_mu : c.mu;
    const double var = (1.0 - rho) * c.sigma * c.sigma + rho * (z - centre) * (z - centre);
    c.sigma = std::max(std::sqrt(var), cfg.min_sigma);
  } else {
    for (auto& c : comps) {
      c.w *= 1.0 - alpha;
    }
    comps.push_back(MixtureComponent{alpha, z, cfg.new_component_sigma});
    alt.renormalize();
  }

  if (cfg.prune_threshold > 0.0 && comps.size() > 1) {
    const auto light = [&](const MixtureComponent& c) { return c.w < cfg.prune_threshold; };
    if (!std::all_of(comps.begin(), comps.end(), light)) {
      std::erase_if(comps, light);
      alt.renormalize();
    }
  }
  particle.n1 += 1.0;
}

KernelBandwidth kernel_bandwidth(std::size_t d, std::size_t m) {
  const double dd = static_cast<double>(d);
  const double b = std::pow(4.0 / ((dd + 2.0) * static_cast<double>(m)), 1.0 / (dd + 4.0));
  return {std::sqrt(1.0 - b * b), b};
}

KernelSmoothingState kernel_moments(const ParticleSystem& ps) {
  const std::size_t m = ps.size();
  const std::size_t d = ps[0].params.beta.size();
  const auto dim = static_cast<Eigen::Index>(d);
  const auto view = [dim](const Particle& p) { return Eigen::Map<const Eigen::VectorXd>(p.params.beta.data(), dim); };
  // Deviations from the first particle keep Q exactly zero for a collapsed cloud.
  const Eigen::VectorXd origin = view(ps[0]);
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(dim);
  for (const auto& p : ps.particles()) {
    shift += view(p) - origin;
  }
  shift /= static_cast<double>(m);

  KernelSmoothingState state;
  state.d = d;
  state.mean = origin + shift;
  state.covariance = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& p : ps.particles()) {
    const Eigen::VectorXd dev = (view(p) - origin) - shift;
    state.covariance.selfadjointView<Eigen::Lower>().rankUpdate(dev);
  }
  state.covariance = state.covariance.selfadjointView<Eigen::Lower>();
  state.covariance /= static_cast<double>(m);
  const auto bw = kernel_bandwidth(d, m);
  state.a = bw.a;
  state.b = bw.b;
  return state;
}

KernelSmoothingState kernel_refresh_betas(ParticleSystem& ps, std::uint64_t seed, std::uint64_t step,
                                          const WorkerPool& pool) {
  KernelSmoothingState state = kernel_moments(ps);
  const auto d = static_cast<Eigen::Index>(state.d);

  Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(d, d);
  const double trace = state.covariance.trace();
  if (trace > 0.0) {
    Eigen::LLT<Eigen::MatrixXd> llt(state.covariance);
    if (llt.info() != Eigen::Success) {
      const Eigen::MatrixXd ridged =
          state.covariance + (1e-10 * trace / static_cast<double>(d)) * Eigen::MatrixXd::Identity(d, d);
      llt.compute(ridged);
    }
    if (llt.info() == Eigen::Success) {
      factor = llt.matrixL();
    }
  }
  factor *= state.b;

  const double a = state.a;
  const Eigen::VectorXd shift = (1.0 - a) * state.mean;
  pool.for_each_index(ps.size(), [&](std::size_t m) {
    auto& beta = ps[m].params.beta;
    Eigen::Map<Eigen::VectorXd> view(beta.data(), d);
    if (trace <= 0.0) {
      return;
    }
    RandomStream rng(seed, step, StreamTag::kKernel, m);
    Eigen::VectorXd noise(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      noise[i] = rng.normal();
    }
    view = a * view + shift + factor * noise;
  });
  return state;
}

}  // namespace smcfdr
