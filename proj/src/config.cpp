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

#include <smcfdr/config.hpp>

#include <charconv>
#include <functional>
#include <sstream>

#include <fmt/format.h>

namespace smcfdr {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ContractViolation(fmt::format("config key '{}': cannot parse '{}'", key, value));
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") {
    return true;
  }
  if (value == "false" || value == "0") {
    return false;
  }
  throw ContractViolation(fmt::format("config key '{}': expected true/false, got '{}'", key, value));
}

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class T>
Field number_field(const char* key, T EngineConfig::*member) {
  return {key, [member](const RunConfig& c) { return fmt::format("{}", c.engine.*member); },
          [key, member](RunConfig& c, const std::string& v) { c.engine.*member = parse_number<T>(key, v); }};
}

Field bool_field(const char* key, bool EngineConfig::*member) {
  return {key, [member](const RunConfig& c) { return std::string(c.engine.*member ? "true" : "false"); },
          [key, member](RunConfig& c, const std::string& v) { c.engine.*member = parse_bool(key, v); }};
}

template <class T>
Field rejuvenation_field(const char* key, T RejuvenationConfig::*member) {
  if constexpr (std::is_same_v<T, bool>) {
    return {key, [member](const RunConfig& c) { return std::string(c.engine.rejuvenation.*member ? "true" : "false"); },
            [key, member](RunConfig& c, const std::string& v) { c.engine.rejuvenation.*member = parse_bool(key, v); }};
  } else {
    return {key, [member](const RunConfig& c) { return fmt::format("{}", c.engine.rejuvenation.*member); },
            [key, member](RunConfig& c, const std::string& v) {
              c.engine.rejuvenation.*member = parse_number<T>(key, v);
            }};
  }
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      number_field("particles", &EngineConfig::particles),
      number_field("n0_init", &EngineConfig::n0_init),
      number_field("n1_init", &EngineConfig::n1_init),
      number_field("k_init", &EngineConfig::k_init),
      number_field("mu1_init", &EngineConfig::mu1_init),
      number_field("sigma1_init", &EngineConfig::sigma1_init),
      number_field("sigma0_init", &EngineConfig::sigma0_init),
      number_field("mu0_fixed", &EngineConfig::mu0_fixed),
      number_field("beta_prior_lo", &EngineConfig::beta_prior_lo),
      number_field("beta_prior_hi", &EngineConfig::beta_prior_hi),
      number_field("ness_reinit_threshold", &EngineConfig::ness_reinit_threshold),
      number_field("decision_threshold", &EngineConfig::decision_threshold),
      {"resample_mode", [](const RunConfig& c) { return to_string(c.engine.resample_mode); },
       [](RunConfig& c, const std::string& v) { c.engine.resample_mode = resample_mode_from_string(v); }},
      number_field("ess_resample_threshold", &EngineConfig::ess_resample_threshold),
      bool_field("update_null_mean", &EngineConfig::update_null_mean),
      bool_field("rejuvenate_mixture", &EngineConfig::rejuvenate_mixture),
      bool_field("convolve", &EngineConfig::convolve),
      bool_field("streaming_decisions", &EngineConfig::streaming_decisions),
      number_field("seed", &EngineConfig::seed),
      number_field("workers", &EngineConfig::workers),
      rejuvenation_field("match_threshold", &RejuvenationConfig::match_threshold),
      rejuvenation_field("new_component_sigma", &RejuvenationConfig::new_component_sigma),
      {"allocation_rule", [](const RunConfig& c) { return to_string(c.engine.rejuvenation.allocation_rule); },
       [](RunConfig& c, const std::string& v) { c.engine.rejuvenation.allocation_rule = allocation_rule_from_string(v); }},
      rejuvenation_field("allocation_threshold", &RejuvenationConfig::allocation_threshold),
      rejuvenation_field("variance_update_uses_old_mean", &RejuvenationConfig::variance_update_uses_old_mean),
      rejuvenation_field("prune_threshold", &RejuvenationConfig::prune_threshold),
      rejuvenation_field("min_sigma", &RejuvenationConfig::min_sigma),
      {"covariate_dim", [](const RunConfig& c) { return fmt::format("{}", c.covariate_dim); },
       [](RunConfig& c, const std::string& v) { c.covariate_dim = parse_number<std::size_t>("covariate_dim", v); }},
  };
  return table;
}

}  // namespace

KeyValues to_key_values(const RunConfig& cfg) {
  KeyValues out;
  for (const auto& f : fields()) {
    out.emplace_back(f.key, f.get(cfg));
  }
  return out;
}

void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ContractViolation(fmt::format("unknown config key '{}'", key));
}

void apply_config_text(RunConfig& cfg, std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ContractViolation(fmt::format("{}:{}: expected 'key = value'", source, line_no));
    }
    try {
      apply_key_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ContractViolation& e) {
      throw ContractViolation(fmt::format("{}:{}: {}", source, line_no, e.what()));
    }
  }
}

std::string to_config_text(const RunConfig& cfg) {
  std::ostringstream out;
  for (const auto& [key, value] : to_key_values(cfg)) {
    out << key << " = " << value << '\n';
  }
  return out.str();
}

}  // namespace smcfdr
