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

#ifndef SMCFDR_SNAPSHOT_HPP
#define SMCFDR_SNAPSHOT_HPP

#include <string>

#include <smcfdr/engine.hpp>

namespace smcfdr {

/**
 * JSON text form of a posterior snapshot.
 *
 * Layout: {"schema", "config": {key: value text}, "covariate_dim", "rng": {"seed", "steps"},
 * "particles": [{"beta", "null": [mu, sigma], "alt": [[w, mu, sigma], ...], "n0", "n1", "log_weight"}]}.
 * A log-weight of -inf is written as null. Doubles are written in shortest round-trip form.
 */
std::string write_snapshot(const PosteriorSnapshot& snap);

/// Throws ContractViolation on a schema mismatch or malformed document.
PosteriorSnapshot read_snapshot(const std::string& text);

}  // namespace smcfdr

#endif  // SMCFDR_SNAPSHOT_HPP
