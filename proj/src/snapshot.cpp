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

#include <smcfdr/snapshot.hpp>

#include <cmath>
#include <limits>

#include <json.hpp>

#include <smcfdr/config.hpp>

namespace smcfdr {

using nlohmann::json;

std::string write_snapshot(const PosteriorSnapshot& snap) {
  json doc;
  doc["schema"] = PosteriorSnapshot::kSchema;
  json config = json::object();
  for (const auto& [key, value] : to_key_values(RunConfig{snap.config, snap.covariate_dim})) {
    config[key] = value;
  }
  doc["config"] = std::move(config);
  doc["covariate_dim"] = snap.covariate_dim;
  doc["rng"] = {{"seed", snap.config.seed}, {"steps", snap.steps}};
  json particles = json::array();
  for (std::size_t m = 0; m < snap.particles.size(); ++m) {
    const Particle& p = snap.particles[m];
    json alt = json::array();
    for (const auto& c : p.params.alt.components()) {
      alt.push_back({c.w, c.mu, c.sigma});
    }
    json entry = {{"beta", p.params.beta},
                  {"null", {p.params.null_model.mu(), p.params.null_model.sigma()}},
                  {"alt", std::move(alt)},
                  {"n0", p.n0},
                  {"n1", p.n1}};
    const double lw = m < snap.log_weights.size() ? snap.log_weights[m] : 0.0;
    entry["log_weight"] = std::isfinite(lw) ? json(lw) : json(nullptr);
    particles.push_back(std::move(entry));
  }
  doc["particles"] = std::move(particles);
  return doc.dump(1) + "\n";
}

PosteriorSnapshot read_snapshot(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("schema").get<std::string>() != PosteriorSnapshot::kSchema) {
      throw ContractViolation("unsupported snapshot schema '" + doc.at("schema").get<std::string>() + "'");
    }
    RunConfig run;
    for (const auto& [key, value] : doc.at("config").items()) {
      apply_key_value(run, key, value.get<std::string>());
    }
    PosteriorSnapshot snap;
    snap.config = run.engine;
    snap.covariate_dim = doc.at("covariate_dim").get<std::size_t>();
    snap.config.seed = doc.at("rng").at("seed").get<std::uint64_t>();
    snap.steps = doc.at("rng").at("steps").get<std::uint64_t>();
    for (const auto& entry : doc.at("particles")) {
      std::vector<MixtureComponent> comps;
      for (const auto& c : entry.at("alt")) {
        comps.push_back(MixtureComponent{c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()});
      }
      const auto& null_params = entry.at("null");
      Particle p{ModelParams{entry.at("beta").get<std::vector<double>>(),
                             NullModel(null_params.at(0).get<double>(), null_params.at(1).get<double>()),
                             AlternativeModel(std::move(comps))},
                 entry.at("n0").get<double>(), entry.at("n1").get<double>()};
      if (p.params.beta.size() != snap.covariate_dim + 1) {
        throw ContractViolation("snapshot particle has the wrong coefficient length");
      }
      snap.particles.push_back(std::move(p));
      const auto& lw = entry.at("log_weight");
      snap.log_weights.push_back(lw.is_null() ? -std::numeric_limits<double>::infinity() : lw.get<double>());
    }
    return snap;
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("malformed snapshot: ") + e.what());
  }
}

}  // namespace smcfdr
