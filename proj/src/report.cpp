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

#include <smcfdr/report.hpp>

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include <smcfdr/io.hpp>

namespace smcfdr {

namespace {

// Rounds to the same 6 significant digits used in the text outputs.
double six_digits(double v) { return std::stod(format_number(v)); }

}  // namespace

NessStats ness_stats(const RunTrace& trace) {
  NessStats stats;
  if (trace.empty()) {
    return stats;
  }
  double total = 0.0;
  stats.min = trace.front().ness;
  stats.max = trace.front().ness;
  for (const auto& e : trace) {
    const double value = e.reinit ? e.trigger_ness : e.ness;
    stats.min = std::min(stats.min, value);
    stats.max = std::max(stats.max, e.ness);
    total += e.ness;
    stats.below_half += e.ness < 0.5 ? 1 : 0;
    stats.reinits += e.reinit ? 1 : 0;
  }
  stats.mean = total / static_cast<double>(trace.size());
  return stats;
}

RunSummary summarize(const Engine& engine, std::span<const DecisionRecord> decisions, std::span<const int> truths) {
  RunSummary s{.records = engine.steps(),
               .particles = engine.config().particles,
               .seed = engine.config().seed,
               .map = engine.map_particle(),
               .beta_mean = engine.weighted_beta_mean(),
               .ness = ness_stats(engine.trace()),
               .confusion = std::nullopt};
  if (!truths.empty()) {
    s.confusion = confusion(decisions, truths);
  }
  return s;
}

std::string summary_text(const RunSummary& s) {
  std::string out;
  auto line = [&out](const std::string& text) { out += text + "\n"; };
  line(fmt::format("records            {}", s.records));
  line(fmt::format("particles          {}", s.particles));
  line(fmt::format("seed               {}", s.seed));
  line("");
  if (s.confusion) {
    const auto& c = *s.confusion;
    line("detections         declared_null  declared_alt  total");
    line(fmt::format("  true null        {:>13}  {:>12}  {:>5}", c.null_declared_null, c.null_declared_alt,
                     c.null_declared_null + c.null_declared_alt));
    line(fmt::format("  true alt         {:>13}  {:>12}  {:>5}", c.alt_declared_null, c.alt_declared_alt,
                     c.true_alt()));
    line(fmt::format("  total            {:>13}  {:>12}  {:>5}", c.null_declared_null + c.alt_declared_null,
                     c.declared_alt(), c.total()));
    line(fmt::format("realized FDR       {}", format_number(c.fdr())));
    line(fmt::format("power              {}", format_number(c.power())));
    line("");
  }
  const auto& p = s.map.params;
  std::string beta;
  for (double b : p.beta) {
    beta += (beta.empty() ? "" : ", ") + format_number(b);
  }
  std::string beta_mean;
  for (double b : s.beta_mean) {
    beta_mean += (beta_mean.empty() ? "" : ", ") + format_number(b);
  }
  line(fmt::format("MAP beta           ({})", beta));
  line(fmt::format("mean beta          ({})", beta_mean));
  line(fmt::format("MAP null           mu0 {}  sigma0 {}", format_number(p.null_model.mu()),
                   format_number(p.null_model.sigma())));
  const auto& dom = p.alt[p.alt.dominant()];
  line(fmt::format("MAP alternative    dominant: w {}  mu {}  sigma {}", format_number(dom.w), format_number(dom.mu),
                   format_number(dom.sigma)));
  for (const auto& c : p.alt.components()) {
    if (&c == &dom) {
      continue;
    }
    line(fmt::format("                   {}: w {}  mu {}  sigma {}", c.w < kMinorComponentWeight ? "minor" : "other",
                     format_number(c.w), format_number(c.mu), format_number(c.sigma)));
  }
  line("");
  line(fmt::format("NESS               min {}  mean {}  max {}", format_number(s.ness.min), format_number(s.ness.mean),
                   format_number(s.ness.max)));
  line(fmt::format("steps below 0.5    {}", s.ness.below_half));
  line(fmt::format("re-initializations {}", s.ness.reinits));
  return out;
}

std::string summary_json(const RunSummary& s) {
  using nlohmann::json;
  json doc;
  doc["schema"] = "smcfdr.summary/1";
  doc["schemas"] = {{"decisions.csv", kDecisionsSchema}, {"trace.csv", kTraceSchema}};
  doc["records"] = s.records;
  doc["particles"] = s.particles;
  doc["seed"] = s.seed;
  if (s.confusion) {
    const auto& c = *s.confusion;
    doc["confusion"] = {{"null_declared_null", c.null_declared_null},
                        {"null_declared_alt", c.null_declared_alt},
                        {"alt_declared_null", c.alt_declared_null},
                        {"alt_declared_alt", c.alt_declared_alt},
                        {"fdr", six_digits(c.fdr())},
                        {"power", six_digits(c.power())}};
  }
  const auto& p = s.map.params;
  json beta = json::array();
  for (double b : p.beta) {
    beta.push_back(six_digits(b));
  }
  json beta_mean = json::array();
  for (double b : s.beta_mean) {
    beta_mean.push_back(six_digits(b));
  }
  json main_components = json::array();
  json minor_components = json::array();
  for (const auto& c : p.alt.components()) {
    json entry = {{"w", six_digits(c.w)}, {"mu", six_digits(c.mu)}, {"sigma", six_digits(c.sigma)}};
    (c.w < kMinorComponentWeight ? minor_components : main_components).push_back(std::move(entry));
  }
  const auto& dom = p.alt[p.alt.dominant()];
  doc["map"] = {{"beta", beta},
                {"mu0", six_digits(p.null_model.mu())},
                {"sigma0", six_digits(p.null_model.sigma())},
                {"dominant", {{"w", six_digits(dom.w)}, {"mu", six_digits(dom.mu)}, {"sigma", six_digits(dom.sigma)}}},
                {"components", main_components},
                {"minor_components", minor_components},
                {"n0", six_digits(s.map.n0)},
                {"n1", six_digits(s.map.n1)}};
  doc["beta_mean"] = beta_mean;
  doc["ness"] = {{"min", six_digits(s.ness.min)},
                 {"mean", six_digits(s.ness.mean)},
                 {"max", six_digits(s.ness.max)},
                 {"steps_below_half", s.ness.below_half},
                 {"reinits", s.ness.reinits}};
  return doc.dump(2) + "\n";
}

}  // namespace smcfdr
