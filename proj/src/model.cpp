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

#include <smcfdr/model.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace smcfdr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kWeightTolerance = 1e-9;

const double kLogMinSignal = std::log(kMinSignalPrior);
const double kLogOneMinusMinSignal = std::log1p(-kMinSignalPrior);
const double kLogMinNull = std::log(1e-16);
const double kLogOneMinusMinNull = std::log1p(-1e-16);

// log(1 / (1 + exp(-s))) without overflow for any finite s.
double log_sigmoid(double s) noexcept {
  if (s >= 0.0) {
    return -std::log1p(std::exp(-s));
  }
  return s - std::log1p(std::exp(s));
}

void check_sigma(double sigma, const char* what) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ContractViolation(fmt::format("{} must be positive and finite, got {}", what, sigma));
  }
}

}  // namespace

NullModel::NullModel(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  if (!std::isfinite(mu)) {
    throw ContractViolation("null mean must be finite");
  }
  check_sigma(sigma, "null sigma");
}

void NullModel::set_mu(double mu) {
  if (!std::isfinite(mu)) {
    throw ContractViolation("null mean must be finite");
  }
  mu_ = mu;
}

void NullModel::set_sigma(double sigma) {
  check_sigma(sigma, "null sigma");
  sigma_ = sigma;
}

AlternativeModel::AlternativeModel(std::vector<MixtureComponent> components) : components_(std::move(components)) {
  validate();
}

AlternativeModel AlternativeModel::single(double mu, double sigma) {
  return AlternativeModel({MixtureComponent{1.0, mu, sigma}});
}

std::size_t AlternativeModel::dominant() const noexcept {
  std::size_t best = 0;
  for (std::size_t k = 1; k < components_.size(); ++k) {
    if (components_[k].w > components_[best].w) {
      best = k;
    }
  }
  return best;
}

void AlternativeModel::renormalize() {
  double total = 0.0;
  for (const auto& c : components_) {
    total += c.w;
  }
  for (auto& c : components_) {
    c.w /= total;
  }
}

void AlternativeModel::validate() const {
  if (components_.empty()) {
    throw ContractViolation("alternative mixture needs at least one component");
  }
  double total = 0.0;
  for (const auto& c : components_) {
    check_sigma(c.sigma, "component sigma");
    if (!std::isfinite(c.mu)) {
      throw ContractViolation("component mean must be finite");
    }
    if (!(c.w >= 0.0 && c.w <= 1.0)) {
      throw ContractViolation(fmt::format("component weight {} outside [0, 1]", c.w));
    }
    total += c.w;
  }
  if (std::abs(total - 1.0) > kWeightTolerance) {
    throw ContractViolation(fmt::format("component weights sum to {}, expected 1", total));
  }
}

double linear_predictor(std::span<const double> beta, std::span<const double> x) {
  if (beta.size() != x.size() + 1) {
    throw ContractViolation(
        fmt::format("coefficient length {} does not match covariate length {} + 1", beta.size(), x.size()));
  }
  double s = beta[0];
  for (std::size_t j = 0; j < x.size(); ++j) {
    s += beta[j + 1] * x[j];
  }
  return s;
}

LogPrior log_logistic_prior(std::span<const double> beta, std::span<const double> x) {
  const double s = linear_predictor(beta, x);
  double log_signal = log_sigmoid(s);
  double log_null = log_sigmoid(-s);
  if (log_signal < kLogMinSignal) {
    log_signal = kLogMinSignal;
    log_null = kLogOneMinusMinSignal;
  } else if (log_null < kLogMinNull) {
    log_null = kLogMinNull;
    log_signal = kLogOneMinusMinNull;
  }
  return {log_signal, log_null};
}

double logistic_prior(std::span<const double> beta, std::span<const double> x) {
  const double s = linear_predictor(beta, x);
  const double c = s >= 0.0 ? 1.0 / (1.0 + std::exp(-s)) : std::exp(s) / (1.0 + std::exp(s));
  return std::clamp(c, kMinSignalPrior, kMaxSignalPrior);
}

double normal_log_density(double z, double mu, double sigma) noexcept {
  constexpr double kHalfLogTwoPi = 0.91893853320467274178;
  const double u = (z - mu) / sigma;
  return -0.5 * u * u - std::log(sigma) - kHalfLogTwoPi;
}

double normal_density(double z, double mu, double sigma) noexcept {
  return std::exp(normal_log_density(z, mu, sigma));
}

double null_log_density(const NullModel& nm, double z) noexcept {
  return normal_log_density(z, nm.mu(), nm.sigma());
}

double null_density(const NullModel& nm, double z) noexcept {
  return std::exp(null_log_density(nm, z));
}

double log_add_exp(double a, double b) noexcept {
  if (a == kNegInf) {
    return b;
  }
  if (b == kNegInf) {
    return a;
  }
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double alt_log_density(const AlternativeModel& am, const NullModel& nm, double z, bool convolve) {
  double acc = kNegInf;
  for (const auto& c : am.components()) {
    if (c.w <= 0.0) {
      continue;
    }
    double term;
    if (convolve) {
      term = normal_log_density(z, nm.mu() + c.mu, std::hypot(nm.sigma(), c.sigma));
    } else {
      term = normal_log_density(z, c.mu, c.sigma);
    }
    acc = log_add_exp(acc, std::log(c.w) + term);
  }
  return acc;
}

double alt_density(const AlternativeModel& am, const NullModel& nm, double z, bool convolve) {
  return std::exp(alt_log_density(am, nm, z, convolve));
}

double log_marginal_likelihood(const ModelParams& p, const TestRecord& rec, bool convolve) {
  const LogPrior prior = log_logistic_prior(p.beta, rec.x);
  return log_add_exp(prior.log_signal + alt_log_density(p.alt, p.null_model, rec.z, convolve),
                     prior.log_null + null_log_density(p.null_model, rec.z));
}

double marginal_likelihood(const ModelParams& p, const TestRecord& rec, bool convolve) {
  return std::exp(log_marginal_likelihood(p, rec, convolve));
}

double two_groups_posterior(const LogPrior& prior, double log_f0, double log_f1) noexcept {
  const double signal = prior.log_signal + log_f1;
  const double null = prior.log_null + log_f0;
  if (signal == kNegInf && null == kNegInf) {
    return std::exp(prior.log_signal);
  }
  // 1 / (1 + exp(null - signal)) saturates cleanly at 0 and 1.
  return 1.0 / (1.0 + std::exp(null - signal));
}

double posterior_signal_prob(const ModelParams& p, const TestRecord& rec, bool convolve) {
  const LogPrior prior = log_logistic_prior(p.beta, rec.x);
  return two_groups_posterior(prior, null_log_density(p.null_model, rec.z),
                              alt_log_density(p.alt, p.null_model, rec.z, convolve));
}

}  // namespace smcfdr
