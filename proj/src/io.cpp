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

#include <smcfdr/io.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace smcfdr {

namespace {

std::vector<std::string> split_row(std::string line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto first = cell.find_first_not_of(' ');
    const auto last = cell.find_last_not_of(' ');
    cells.push_back(first == std::string::npos ? std::string{} : cell.substr(first, last - first + 1));
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return cells;
}

template <class T>
T parse_cell(const std::string& cell, const std::string& source, std::size_t line, const char* column) {
  T value{};
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (cell.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(fmt::format("{}:{}: cannot parse {} value '{}'", source, line, column, cell));
  }
  return value;
}

}  // namespace

std::string format_number(double value) { return fmt::format("{:.6g}", value); }

RecordReader::RecordReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {
  std::string header;
  if (!std::getline(in_, header)) {
    throw ParseError(fmt::format("{}:1: missing header", source_));
  }
  const auto cols = split_row(header);
  if (cols.size() < 2 || cols[0] != "id" || cols[1] != "z") {
    throw ParseError(fmt::format("{}:1: header must start with 'id,z'", source_));
  }
  std::size_t n = cols.size();
  if (cols.back() == "h") {
    has_truth_ = true;
    --n;
  }
  dim_ = n - 2;
  for (std::size_t j = 0; j < dim_; ++j) {
    if (cols[j + 2] != fmt::format("x{}", j + 1)) {
      throw ParseError(fmt::format("{}:1: expected column 'x{}', found '{}'", source_, j + 1, cols[j + 2]));
    }
  }
}

std::optional<TestRecord> RecordReader::next() {
  std::string row;
  while (std::getline(in_, row)) {
    ++line_;
    if (row.empty() || row == "\r") {
      continue;
    }
    const auto cells = split_row(row);
    const std::size_t expected = dim_ + 2 + (has_truth_ ? 1 : 0);
    if (cells.size() != expected) {
      throw ParseError(fmt::format("{}:{}: expected {} fields, found {}", source_, line_, expected, cells.size()));
    }
    TestRecord rec;
    rec.index = parse_cell<std::size_t>(cells[0], source_, line_, "id");
    rec.z = parse_cell<double>(cells[1], source_, line_, "z");
    if (!std::isfinite(rec.z)) {
      throw ParseError(fmt::format("{}:{}: z must be finite", source_, line_));
    }
    rec.x.resize(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      rec.x[j] = parse_cell<double>(cells[j + 2], source_, line_, "covariate");
      if (!std::isfinite(rec.x[j])) {
        throw ParseError(fmt::format("{}:{}: covariates must be finite", source_, line_));
      }
    }
    if (has_truth_) {
      const int h = parse_cell<int>(cells.back(), source_, line_, "h");
      if (h != 0 && h != 1) {
        throw ParseError(fmt::format("{}:{}: h must be 0 or 1", source_, line_));
      }
      rec.truth = h;
    }
    return rec;
  }
  return std::nullopt;
}

std::vector<TestRecord> read_records(std::istream& in, const std::string& source) {
  RecordReader reader(in, source);
  std::vector<TestRecord> out;
  while (auto rec = reader.next()) {
    out.push_back(std::move(*rec));
  }
  return out;
}

void write_records(std::ostream& out, std::span<const TestRecord> records) {
  const std::size_t dim = records.empty() ? 0 : records.front().x.size();
  const bool truth = !records.empty() && records.front().truth.has_value();
  out << "id,z";
  for (std::size_t j = 0; j < dim; ++j) {
    out << ",x" << j + 1;
  }
  out << (truth ? ",h\n" : "\n");
  for (const auto& rec : records) {
    out << rec.index << ',' << format_number(rec.z);
    for (double xj : rec.x) {
      out << ',' << format_number(xj);
    }
    if (truth) {
      out << ',' << rec.truth.value_or(0);
    }
    out << '\n';
  }
}

void write_decisions(std::ostream& out, std::span<const DecisionRecord> decisions) {
  out << "id,posterior_prob,declared\n";
  for (const auto& d : decisions) {
    out << d.index << ',' << format_number(d.posterior_prob) << ',' << d.declared << '\n';
  }
}

std::vector<DecisionRecord> read_decisions(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || split_row(line) != std::vector<std::string>{"id", "posterior_prob", "declared"}) {
    throw ParseError(fmt::format("{}:1: expected header 'id,posterior_prob,declared'", source));
  }
  std::vector<DecisionRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto cells = split_row(line);
    if (cells.size() != 3) {
      throw ParseError(fmt::format("{}:{}: expected 3 fields, found {}", source, line_no, cells.size()));
    }
    out.push_back(DecisionRecord{parse_cell<std::size_t>(cells[0], source, line_no, "id"),
                                 parse_cell<double>(cells[1], source, line_no, "posterior_prob"),
                                 parse_cell<int>(cells[2], source, line_no, "declared")});
  }
  return out;
}

void write_trace(std::ostream& out, const RunTrace& trace, std::size_t covariate_dim) {
  out << "t,ness";
  for (std::size_t j = 0; j <= covariate_dim; ++j) {
    out << ",map_beta_" << j;
  }
  out << ",map_K,map_sigma0,reinit\n";
  for (const auto& e : trace) {
    out << e.t << ',' << format_number(e.ness);
    for (double b : e.map_beta) {
      out << ',' << format_number(b);
    }
    out << ',' << e.map_k << ',' << format_number(e.map_sigma0) << ',' << (e.reinit ? 1 : 0) << '\n';
  }
}

void write_provisional(std::ostream& out, const RunTrace& trace) {
  out << "t,id,posterior_prob,declared\n";
  for (const auto& e : trace) {
    if (e.provisional) {
      out << e.t << ',' << e.provisional->index << ',' << format_number(e.provisional->posterior_prob) << ','
          << e.provisional->declared << '\n';
    }
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace smcfdr
