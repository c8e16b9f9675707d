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

#ifndef SMCFDR_IO_HPP
#define SMCFDR_IO_HPP

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <smcfdr/engine.hpp>
#include <smcfdr/model.hpp>

/**
 * \file
 * \brief CSV schemas shared by the command-line tool and downstream plotting.
 *
 * Every number is written with 6 significant digits and a '.' decimal separator.
 *
 *   records    id,z,x1,...,xJ[,h]
 *   decisions  id,posterior_prob,declared
 *   trace      t,ness,map_beta_0,...,map_beta_J,map_K,map_sigma0,reinit
 *   benchmark  n,particles,seconds,seconds_per_record
 */

namespace smcfdr {

inline constexpr const char* kDecisionsSchema = "smcfdr.decisions/1";
inline constexpr const char* kTraceSchema = "smcfdr.trace/1";
inline constexpr const char* kRecordsSchema = "smcfdr.records/1";
inline constexpr const char* kBenchmarkSchema = "smcfdr.benchmark/1";

/// Malformed input; the message names the source and line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Formats with 6 significant digits, locale independent.
std::string format_number(double value);

/// Streaming reader for the records schema. Reads one row per call.
class RecordReader {
 public:
  RecordReader(std::istream& in, std::string source);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] bool has_truth() const noexcept { return has_truth_; }

  /// Next record, or nullopt at end of input. Throws ParseError naming the line on a bad row.
  std::optional<TestRecord> next();

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 1;
  std::size_t dim_ = 0;
  bool has_truth_ = false;
};

std::vector<TestRecord> read_records(std::istream& in, const std::string& source = "input");
void write_records(std::ostream& out, std::span<const TestRecord> records);

void write_decisions(std::ostream& out, std::span<const DecisionRecord> decisions);
std::vector<DecisionRecord> read_decisions(std::istream& in, const std::string& source = "decisions");

void write_trace(std::ostream& out, const RunTrace& trace, std::size_t covariate_dim);

/// Per-step provisional decisions from streaming mode: t,id,posterior_prob,declared.
void write_provisional(std::ostream& out, const RunTrace& trace);

/// Writes \p content to \p path through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace smcfdr

#endif  // SMCFDR_IO_HPP
