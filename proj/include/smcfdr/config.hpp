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

#ifndef SMCFDR_CONFIG_HPP
#define SMCFDR_CONFIG_HPP

#include <cstddef>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include <smcfdr/engine.hpp>

namespace smcfdr {

/// Engine settings plus the covariate dimension the input must have (0 = take it from the input header).
struct RunConfig {
  EngineConfig engine;
  std::size_t covariate_dim = 0;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Every setting as (key, value) text, keys named after the config fields. Values round-trip exactly.
KeyValues to_key_values(const RunConfig& cfg);

/// Sets one field by key. Throws ContractViolation for an unknown key or unparsable value.
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key = value` lines; blank lines and `#` comments are ignored.
void apply_config_text(RunConfig& cfg, std::istream& in, const std::string& source = "config");

/// Renders the `key = value` form accepted by apply_config_text.
std::string to_config_text(const RunConfig& cfg);

}  // namespace smcfdr

#endif  // SMCFDR_CONFIG_HPP
