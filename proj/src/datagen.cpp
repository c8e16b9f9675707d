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

#include <smcfdr/datagen.hpp>

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include <smcfdr/random.hpp>

namespace smcfdr {

CovariateLaw CovariateLaw::parse(const std::string& text) {
  CovariateLaw law;
  const auto open = text.find('(');
  const std::string name = text.substr(0, open);
  if (name == "normal") {
    law.kind = Kind::kNormal;
  } else if (name == "uniform") {
    law.kind = Kind::kUniform;
    law.a = -1.0;
    law.b = 1.0;
  } else {
    throw ContractViolation("unknown covariate law '" + text + "'");
  }
  if (open != std::string::npos) {
    const auto comma = text.find(',', open);
    const auto close = text.find(')', open);
    if (comma == std::string::npos || close == std::string::npos || close < comma) {
      throw ContractViolation("malformed covariate law '" + text + "'");
    }
    try {
      law.a = std::stod(text.substr(open + 1, comma - open - 1));
      law.b = std::stod(text.substr(comma + 1, close - comma - 1));
    } catch (const std::logic_error&) {
      throw ContractViolation("malformed covariate law '" + text + "'");
    }
  }
  if (law.kind == Kind::kNormal ? !(law.b > 0.0) : !(law.a < law.b)) {
    throw ContractViolation("degenerate covariate law '" + text + "'");
  }
  return law;
}

std::string CovariateLaw::to_string() const {
  return fmt::format("{}({},{})", kind == Kind::kNormal ? "normal" : "uniform", a, b);
}

void GeneratorSpec::validate() const {
  if (n < 1) {
    throw ContractViolation("generator needs n >= 1");
  }
  if (beta.empty()) {
    throw ContractViolation("generator needs at least an intercept");
  }
  alt.validate();
}

std::vector<TestRecord> generate(const GeneratorSpec& spec) {
  spec.validate();
  const std::size_t dim = spec.dim();
  std::vector<TestRecord> records;
  records.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::size_t index = spec.first_index + i;
    RandomStream rng(spec.seed, 0, StreamTag::kGenerate, index);
    TestRecord rec;
    rec.index = index;
    rec.x.resize(dim);
    for (double& xj : rec.x) {
      xj = spec.covariates.kind == CovariateLaw::Kind::kNormal ? rng.normal(spec.covariates.a, spec.covariates.b)
                                                              : rng.uniform(spec.covariates.a, spec.covariates.b);
    }
    const int h = rng.bernoulli(logistic_prior(spec.beta, rec.x)) ? 1 : 0;
    if (h == 0) {
      rec.z = rng.normal(spec.null_model.mu(), spec.null_model.sigma());
    } else {
      const auto comps = spec.alt.components();
      double u = rng.uniform();
      std::size_t k = 0;
      while (k + 1 < comps.size() && u >= comps[k].w) {
        u -= comps[k].w;
        ++k;
      }
      const auto& c = comps[k];
      rec.z = spec.convolve ? rng.normal(spec.null_model.mu() + c.mu, std::hypot(spec.null_model.sigma(), c.sigma))
                            : rng.normal(c.mu, c.sigma);
    }
    rec.truth = h;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<TestRecord> generate_regime_change(const GeneratorSpec& before, GeneratorSpec after) {
  if (before.dim() != after.dim()) {
    throw ContractViolation("regimes must share the covariate dimension");
  }
  auto records = generate(before);
  after.first_index = before.first_index + before.n;
  auto tail = generate(after);
  records.insert(records.end(), std::make_move_iterator(tail.begin()), std::make_move_iterator(tail.end()));
  return records;
}

ModelParams true_params(const GeneratorSpec& spec) { return ModelParams{spec.beta, spec.null_model, spec.alt}; }

double fisher_transform(double r, long n_trials, bool standardize) {
  if (!(std::abs(r) < 1.0)) {
    throw std::domain_error(fmt::format("correlation {} outside (-1, 1)", r));
  }
  if (n_trials <= 3) {
    throw ContractViolation("fisher transform needs more than 3 trials");
  }
  const double value = std::atanh(r);
  return standardize ? value * std::sqrt(static_cast<double>(n_trials - 3)) : value;
}

}  // namespace smcfdr
