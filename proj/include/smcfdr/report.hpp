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

#ifndef SMCFDR_REPORT_HPP
#define SMCFDR_REPORT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <smcfdr/engine.hpp>

namespace smcfdr {

/// Components lighter than this are reported apart from the main ones.
inline constexpr double kMinorComponentWeight = 0.01;

struct NessStats {
  double min = 1.0;
  double mean = 1.0;
  double max = 1.0;
  std::size_t below_half = 0;
  std::size_t reinits = 0;
};

NessStats ness_stats(const RunTrace& trace);

struct RunSummary {
  std::size_t records = 0;
  std::size_t particles = 0;
  std::uint64_t seed = 0;
  Particle map;
  std::vector<double> beta_mean;
  NessStats ness;
  std::optional<ConfusionTable> confusion;
};

/// Gathers the report; \p truths may be empty when the input carried no labels.
RunSummary summarize(const Engine& engine, std::span<const DecisionRecord> decisions, std::span<const int> truths);

std::string summary_text(const RunSummary& summary);
std::string summary_json(const RunSummary& summary);

}  // namespace smcfdr

#endif  // SMCFDR_REPORT_HPP
