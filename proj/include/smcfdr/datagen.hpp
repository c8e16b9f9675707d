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

#ifndef SMCFDR_DATAGEN_HPP
#define SMCFDR_DATAGEN_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <smcfdr/model.hpp>

namespace smcfdr {

/// Sampling law for each covariate coordinate (iid across coordinates and records).
struct CovariateLaw {
  enum class Kind { kNormal, kUniform };
  Kind kind = Kind::kNormal;
  double a = 0.0;  ///< mean, or lower bound
  double b = 1.0;  ///< standard deviation, or upper bound

  /// Parses "normal(mean,sd)", "uniform(lo,hi)", or bare "normal" / "uniform" for the standard forms.
  static CovariateLaw parse(const std::string& text);
  [[nodiscard]] std::string to_string() const;
};

struct GeneratorSpec {
  std::size_t n = 10000;
  RegressionCoefficients beta{-3.5, 0.70710678118654752, 0.70710678118654752};
  NullModel null_model{0.0, 1.0};
  AlternativeModel alt = AlternativeModel::single(3.0, 0.5);
  /// true: alternative components describe the effect theta and are convolved with the null.
  bool convolve = false;
  CovariateLaw covariates;
  std::uint64_t seed = 1;
  std::size_t first_index = 0;  ///< index assigned to the first record

  [[nodiscard]] std::size_t dim() const noexcept { return beta.size() - 1; }
  void validate() const;
};

/// Draws x, then h ~ Bernoulli(c(x)), then z from f0 or f1. Record i uses its own random stream.
std::vector<TestRecord> generate(const GeneratorSpec& spec);

/// Records from \p before followed by records from \p after, with contiguous indices.
std::vector<TestRecord> generate_regime_change(const GeneratorSpec& before, GeneratorSpec after);

/// Model parameters of a generator, for scoring decisions against the truth.
ModelParams true_params(const GeneratorSpec& spec);

/**
 * Fisher z-transform of a correlation from \p n_trials paired observations.
 *
 * With \p standardize the value is scaled by sqrt(n_trials - 3) so the null is
 * approximately standard normal.
 */
double fisher_transform(double r, long n_trials, bool standardize = true);

}  // namespace smcfdr

#endif  // SMCFDR_DATAGEN_HPP
