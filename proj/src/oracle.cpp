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

#include <smcfdr/oracle.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace smcfdr {

std::vector<DecisionRecord> true_param_decisions(std::span<const TestRecord> records, const GeneratorSpec& truth,
                                                 double threshold) {
  return decide(true_params(truth), records, threshold, truth.convolve);
}

std::size_t BetaGrid::cells() const {
  std::size_t total = 1;
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (total > kMaxGridCells / std::max<std::size_t>(points, 1)) {
      return kMaxGridCells + 1;
    }
    total *= points;
  }
  return total;
}

double GridPosterior::marginal_quantile(std::size_t coefficient, double p) const {
  const auto& marginal = marginals.at(coefficient);
  double acc = 0.0;
  for (std::size_t i = 0; i < marginal.size(); ++i) {
    acc += marginal[i];
    if (acc >= p) {
      return axes[coefficient][i];
    }
  }
  return axes[coefficient].back();
}

GridPosterior grid_posterior_beta(std::span<const TestRecord> records, const NullModel& null_model,
                                  const AlternativeModel& alt, const BetaGrid& grid, bool convolve) {
  const std::size_t d = grid.lo.size();
  if (d == 0 || grid.hi.size() != d) {
    throw ContractViolation("grid bounds must have matching nonzero length");
  }
  if (d > 3) {
    throw ContractViolation("grid posterior supports at most two covariates");
  }
  if (grid.points < 2) {
    throw ContractViolation("grid needs at least two points per axis");
  }
  const std::size_t cells = grid.cells();
  if (cells > kMaxGridCells) {
    throw ContractViolation(fmt::format("grid of {}^{} cells exceeds the limit of {}", grid.points, d, kMaxGridCells));
  }
  for (const auto& rec : records) {
    if (rec.x.size() + 1 != d) {
      throw ContractViolation("record covariate length does not match the grid");
    }
  }

  GridPosterior post;
  post.axes.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    post.axes[j].resize(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) {
      post.axes[j][i] = grid.lo[j] + (grid.hi[j] - grid.lo[j]) * static_cast<double>(i) /
                                         static_cast<double>(grid.points - 1);
    }
  }

  std::vector<double> log_f0(records.size());
  std::vector<double> log_f1(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    log_f0[i] = null_log_density(null_model, records[i].z);
    log_f1[i] = alt_log_density(alt, null_model, records[i].z, convolve);
  }

  std::vector<double> log_post(cells);
  std::vector<std::size_t> node(d, 0);
  std::vector<double> beta(d);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t rest = cell;
    for (std::size_t j = d; j-- > 0;) {
      node[j] = rest % grid.points;
      rest /= grid.points;
      beta[j] = post.axes[j][node[j]];
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const LogPrior prior = log_logistic_prior(beta, records[i].x);
      acc += log_add_exp(prior.log_signal + log_f1[i], prior.log_null + log_f0[i]);
    }
    log_post[cell] = acc;
  }

  const double top = *std::max_element(log_post.begin(), log_post.end());
  post.mass.resize(cells);
  double total = 0.0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    post.mass[cell] = std::exp(log_post[cell] - top);
    total += post.mass[cell];
  }
  for (double& m : post.mass) {
    m /= total;
  }

  post.mean.assign(d, 0.0);
  post.marginals.assign(d, std::vector<double>(grid.points, 0.0));
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t rest = cell;
    for (std::size_t j = d; j-- > 0;) {
      const std::size_t i = rest % grid.points;
      rest /= grid.points;
      post.mean[j] += post.mass[cell] * post.axes[j][i];
      post.marginals[j][i] += post.mass[cell];
    }
  }
  return post;
}

}  // namespace smcfdr
