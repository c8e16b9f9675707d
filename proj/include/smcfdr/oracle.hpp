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

#ifndef SMCFDR_ORACLE_HPP
#define SMCFDR_ORACLE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <smcfdr/datagen.hpp>
#include <smcfdr/engine.hpp>
#include <smcfdr/model.hpp>

/**
 * \file
 * \brief Brute-force reference computations for checking the sampler.
 */

namespace smcfdr {

/// Decisions under the generator's own parameters and density mode.
std::vector<DecisionRecord> true_param_decisions(std::span<const TestRecord> records, const GeneratorSpec& truth,
                                                 double threshold = 0.5);

/// Regular grid over the coefficient box: \p points nodes per axis from lo[j] to hi[j] inclusive.
struct BetaGrid {
  std::vector<double> lo;
  std::vector<double> hi;
  std::size_t points = 101;

  [[nodiscard]] std::size_t cells() const;
};

inline constexpr std::size_t kMaxGridCells = 10'000'000;

struct GridPosterior {
  std::vector<std::vector<double>> axes;       ///< node coordinates per coefficient
  std::vector<double> mass;                    ///< row-major over axes, last axis fastest; sums to 1
  std::vector<double> mean;                    ///< posterior mean per coefficient
  std::vector<std::vector<double>> marginals;  ///< per-coefficient marginal mass on the axis nodes

  /// Smallest node value whose marginal cumulative mass reaches \p p.
  [[nodiscard]] double marginal_quantile(std::size_t coefficient, double p) const;
};

/**
 * Posterior over the coefficients with f0 and f1 held fixed, under a flat
 * prior on the grid box. Exhaustive evaluation of the product likelihood.
 *
 * Throws ContractViolation for more than two covariates or more than kMaxGridCells cells.
 */
GridPosterior grid_posterior_beta(std::span<const TestRecord> records, const NullModel& null_model,
                                  const AlternativeModel& alt, const BetaGrid& grid, bool convolve = false);

}  // namespace smcfdr

#endif  // SMCFDR_ORACLE_HPP
