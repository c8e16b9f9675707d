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

#ifndef SMCFDR_CLI_HPP
#define SMCFDR_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <smcfdr/datagen.hpp>

namespace smcfdr {

inline constexpr const char* kGeneratorSchema = "smcfdr.generator/1";

/**
 * Parses a comma-separated generator description such as
 * "n=1000,beta=-3.5:0.7:0.7,alt=0.8:3:0.5/0.2:-3:1,covariates=uniform(-2,2)".
 *
 * Keys: n, seed, beta, mu0, sigma0, alt, covariates, convolve. Commas inside
 * parentheses do not split. \p default_seed is used when no seed key is given.
 */
GeneratorSpec parse_generator_spec(const std::string& text, std::uint64_t default_seed);

std::string generator_json(const GeneratorSpec& spec);

/// Parses "n=10000,20000,40000" into the list of stream lengths.
std::vector<std::size_t> parse_benchmark_sizes(const std::string& text);

/// Entry point of the command-line tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smcfdr

#endif  // SMCFDR_CLI_HPP
