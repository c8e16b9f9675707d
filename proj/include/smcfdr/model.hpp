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

#ifndef SMCFDR_MODEL_HPP
#define SMCFDR_MODEL_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * \file
 * \brief Covariate-dependent two-groups mixture model.
 *
 * A test statistic z with covariates x is drawn from
 *
 *   c(x) f1(z) + (1 - c(x)) f0(z),   c(x) = 1 / (1 + exp(-(b0 + sum_j b_j x_j)))
 *
 * where f0 is a Gaussian null and f1 a finite Gaussian mixture. Every density is
 * available in log-space; the linear-space versions are thin wrappers.
 */

namespace smcfdr {

/// Thrown when a caller breaks a documented precondition (dimension mismatch, bad parameter).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Covariates of one test. Length J is fixed for a run.
using CovariateVector = std::vector<double>;

/// Logistic regression coefficients (b0, b1, ..., bJ); length J + 1.
using RegressionCoefficients = std::vector<double>;

/// Bounds applied to the prior signal probability so that neither group is ever excluded outright.
inline constexpr double kMinSignalPrior = 1e-300;
inline constexpr double kMaxSignalPrior = 1.0 - 1e-16;

/// Gaussian null distribution f0 = N(mu, sigma^2).
class NullModel {
 public:
  NullModel(double mu, double sigma);

  [[nodiscard]] double mu() const noexcept { return mu_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }

  void set_mu(double mu);
  void set_sigma(double sigma);

 private:
  double mu_;
  double sigma_;
};

/// One Gaussian component of the alternative mixture.
struct MixtureComponent {
  double w;
  double mu;
  double sigma;
};

/// Alternative distribution f1: a K >= 1 component Gaussian mixture with weights summing to one.
class AlternativeModel {
 public:
  explicit AlternativeModel(std::vector<MixtureComponent> components);

  /// Single component with unit weight.
  static AlternativeModel single(double mu, double sigma);

  [[nodiscard]] std::size_t size() const noexcept { return components_.size(); }
  [[nodiscard]] std::span<const MixtureComponent> components() const noexcept { return components_; }
  [[nodiscard]] const MixtureComponent& operator[](std::size_t k) const { return components_.at(k); }

  /// Mutable access for the rejuvenation updates, which restore the invariants themselves.
  [[nodiscard]] std::vector<MixtureComponent>& mutable_components() noexcept { return components_; }

  /// Index of the component with the largest weight (lowest index on ties).
  [[nodiscard]] std::size_t dominant() const noexcept;

  /// Rescales weights to sum to one.
  void renormalize();

  /// Throws ContractViolation unless K >= 1, sigma_k > 0, w_k in [0, 1] and the weights sum to one.
  void validate() const;

 private:
  std::vector<MixtureComponent> components_;
};

/// One observation: test statistic, covariates and (for synthetic data) the true hypothesis.
struct TestRecord {
  std::size_t index = 0;
  double z = 0.0;
  CovariateVector x;
  std::optional<int> truth;
};

/// Everything a particle carries that the likelihood depends on.
struct ModelParams {
  RegressionCoefficients beta;
  NullModel null_model;
  AlternativeModel alt;
};

/// Linear predictor b0 + sum_j b_j x_j.
double linear_predictor(std::span<const double> beta, std::span<const double> x);

/// Prior signal probability c(x), clamped to [kMinSignalPrior, kMaxSignalPrior].
double logistic_prior(std::span<const double> beta, std::span<const double> x);

/// log c(x) and log(1 - c(x)), clamped consistently with logistic_prior.
struct LogPrior {
  double log_signal;
  double log_null;
};
LogPrior log_logistic_prior(std::span<const double> beta, std::span<const double> x);

double normal_log_density(double z, double mu, double sigma) noexcept;
double normal_density(double z, double mu, double sigma) noexcept;

double null_log_density(const NullModel& nm, double z) noexcept;
double null_density(const NullModel& nm, double z) noexcept;

/**
 * Alternative density f1(z).
 *
 * With \p convolve false the mixture components describe z directly:
 *   sum_k w_k N(z | mu_k, sigma_k^2).
 * With \p convolve true they describe the signal effect theta, which is then convolved with the null:
 *   sum_k w_k N(z | mu0 + mu_k, sigma0^2 + sigma_k^2).
 */
double alt_log_density(const AlternativeModel& am, const NullModel& nm, double z, bool convolve = false);
double alt_density(const AlternativeModel& am, const NullModel& nm, double z, bool convolve = false);

/// log of c(x) f1(z) + (1 - c(x)) f0(z).
double log_marginal_likelihood(const ModelParams& p, const TestRecord& rec, bool convolve = false);
double marginal_likelihood(const ModelParams& p, const TestRecord& rec, bool convolve = false);

/// Posterior probability of the signal group given log c, log(1 - c), log f0(z) and log f1(z). Never NaN.
double two_groups_posterior(const LogPrior& prior, double log_f0, double log_f1) noexcept;

/// p(h = 1 | z, x, params).
double posterior_signal_prob(const ModelParams& p, const TestRecord& rec, bool convolve = false);

/// Numerically stable log(exp(a) + exp(b)).
double log_add_exp(double a, double b) noexcept;

}  // namespace smcfdr

#endif  // SMCFDR_MODEL_HPP
