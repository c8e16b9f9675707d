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

#include <smcfdr/cli.hpp>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <smcfdr/config.hpp>
#include <smcfdr/engine.hpp>
#include <smcfdr/io.hpp>
#include <smcfdr/report.hpp>
#include <smcfdr/snapshot.hpp>

namespace smcfdr {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_top_level(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') {
      ++depth;
    } else if (ch == ')') {
      --depth;
    }
    if (ch == sep && depth == 0) {
      parts.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  parts.push_back(current);
  return parts;
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  T out{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ContractViolation(fmt::format("generator key '{}': cannot parse '{}'", key, text));
  }
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& text, char sep) {
  std::vector<double> out;
  for (const auto& part : split_top_level(text, sep)) {
    out.push_back(parse_value<double>(key, part));
  }
  return out;
}

struct Outputs {
  fs::path dir;

  void write(const std::string& name, const std::string& content) const { write_file_atomic(dir / name, content); }

  template <class Fn>
  void write_stream(const std::string& name, Fn&& fn) const {
    std::ostringstream buf;
    fn(buf);
    write(name, buf.str());
  }
};

struct RunOptions {
  std::string input;
  std::string output_dir = ".";
  std::string config_path;
  std::string generate;
  std::string benchmark;
  std::string warm_start;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> particles;
  std::optional<double> ness_threshold;
  std::optional<double> decision_threshold;
  std::optional<std::size_t> workers;
  bool streaming_decisions = false;
};

RunConfig effective_config(const RunOptions& opt) {
  RunConfig cfg;
  if (!opt.config_path.empty()) {
    std::istringstream in(read_file(opt.config_path));
    apply_config_text(cfg, in, opt.config_path);
  }
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ContractViolation(fmt::format("--set expects key=value, got '{}'", kv));
    }
    apply_key_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opt.seed) {
    cfg.engine.seed = *opt.seed;
  }
  if (opt.particles) {
    cfg.engine.particles = *opt.particles;
  }
  if (opt.ness_threshold) {
    cfg.engine.ness_reinit_threshold = *opt.ness_threshold;
  }
  if (opt.decision_threshold) {
    cfg.engine.decision_threshold = *opt.decision_threshold;
  }
  if (opt.workers) {
    cfg.engine.workers = *opt.workers;
  }
  if (opt.streaming_decisions) {
    cfg.engine.streaming_decisions = true;
  }
  cfg.engine.validate();
  return cfg;
}

class RecordSource {
 public:
  virtual ~RecordSource() = default;
  [[nodiscard]] virtual std::size_t dim() const = 0;
  [[nodiscard]] virtual bool has_truth() const = 0;
  virtual std::optional<TestRecord> next() = 0;
};

class StreamSource : public RecordSource {
 public:
  StreamSource(std::istream& in, const std::string& name) : reader_(in, name) {}
  [[nodiscard]] std::size_t dim() const override { return reader_.dim(); }
  [[nodiscard]] bool has_truth() const override { return reader_.has_truth(); }
  std::optional<TestRecord> next() override { return reader_.next(); }

 private:
  RecordReader reader_;
};

class MemorySource : public RecordSource {
 public:
  MemorySource(std::vector<TestRecord> records, std::size_t dim) : records_(std::move(records)), dim_(dim) {}
  [[nodiscard]] std::size_t dim() const override { return dim_; }
  [[nodiscard]] bool has_truth() const override { return true; }
  std::optional<TestRecord> next() override {
    if (pos_ == records_.size()) {
      return std::nullopt;
    }
    return records_[pos_++];
  }

 private:
  std::vector<TestRecord> records_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

int run_stream(const RunOptions& opt, RunConfig cfg, RecordSource& source, const Outputs& outputs, std::ostream& out) {
  if (cfg.covariate_dim != 0 && cfg.covariate_dim != source.dim()) {
    throw ContractViolation(
        fmt::format("input has {} covariates, config expects covariate_dim = {}", source.dim(), cfg.covariate_dim));
  }
  cfg.covariate_dim = source.dim();

  std::optional<PosteriorSnapshot> warm;
  if (!opt.warm_start.empty()) {
    warm = read_snapshot(read_file(opt.warm_start));
  }
  Engine engine(cfg.engine, cfg.covariate_dim, warm ? &*warm : nullptr);
  std::vector<int> truths;
  while (auto rec = source.next()) {
    if (source.has_truth()) {
      truths.push_back(rec->truth.value_or(0));
    }
    engine.step(*rec);
  }
  const auto decisions = engine.finalize_decisions();
  const auto summary = summarize(engine, decisions, truths);

  outputs.write("config.txt", to_config_text(cfg));
  outputs.write_stream("decisions.csv", [&](std::ostream& s) { write_decisions(s, decisions); });
  outputs.write_stream("trace.csv", [&](std::ostream& s) { write_trace(s, engine.trace(), cfg.covariate_dim); });
  if (cfg.engine.streaming_decisions) {
    outputs.write_stream("provisional.csv", [&](std::ostream& s) { write_provisional(s, engine.trace()); });
  }
  outputs.write("snapshot.json", write_snapshot(engine.snapshot()));
  outputs.write("summary.json", summary_json(summary));
  const std::string text = summary_text(summary);
  outputs.write("summary.txt", text);
  out << text;
  return 0;
}

int run_benchmark(const RunOptions& opt, const RunConfig& cfg, const Outputs& outputs, std::ostream& out) {
  const auto sizes = parse_benchmark_sizes(opt.benchmark);
  const GeneratorSpec base = parse_generator_spec(opt.generate, cfg.engine.seed);
  std::ostringstream csv;
  csv << "n,particles,seconds,seconds_per_record\n";
  out << fmt::format("{:>10}  {:>9}  {:>12}  {:>12}  {:>8}\n", "n", "particles", "seconds", "per_record", "ratio");
  double previous = 0.0;
  for (std::size_t n : sizes) {
    GeneratorSpec spec = base;
    spec.n = n;
    const auto records = generate(spec);
    const auto start = std::chrono::steady_clock::now();
    Engine engine(cfg.engine, spec.dim());
    for (const auto& rec : records) {
      engine.step(rec);
    }
    const std::size_t decided = engine.finalize_decisions().size();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double per_record = seconds / static_cast<double>(decided);
    csv << n << ',' << cfg.engine.particles << ',' << format_number(seconds) << ',' << format_number(per_record)
        << '\n';
    out << fmt::format("{:>10}  {:>9}  {:>12}  {:>12}  {:>8}\n", n, cfg.engine.particles, format_number(seconds),
                       format_number(per_record), previous > 0.0 ? format_number(seconds / previous) : "-");
    previous = seconds;
  }
  outputs.write("benchmark.csv", csv.str());
  outputs.write("config.txt", to_config_text(cfg));
  return 0;
}

int run_command(const RunOptions& opt, std::ostream& out) {
  const bool synthetic = !opt.generate.empty() || !opt.benchmark.empty();
  if (opt.input.empty() == !synthetic) {
    throw ContractViolation("give either --input, or --generate and/or --benchmark");
  }
  const RunConfig cfg = effective_config(opt);
  const Outputs outputs{opt.output_dir};
  fs::create_directories(outputs.dir);

  if (!opt.benchmark.empty()) {
    return run_benchmark(opt, cfg, outputs, out);
  }
  if (!opt.generate.empty()) {
    const GeneratorSpec spec = parse_generator_spec(opt.generate, cfg.engine.seed);
    auto records = generate(spec);
    outputs.write_stream("gen.csv", [&](std::ostream& s) { write_records(s, records); });
    outputs.write("generator.json", generator_json(spec));
    MemorySource source(std::move(records), spec.dim());
    return run_stream(opt, cfg, source, outputs, out);
  }
  if (opt.input == "-") {
    StreamSource source(std::cin, "stdin");
    return run_stream(opt, cfg, source, outputs, out);
  }
  std::ifstream file(opt.input, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open " + opt.input);
  }
  StreamSource source(file, opt.input);
  return run_stream(opt, cfg, source, outputs, out);
}

}  // namespace

GeneratorSpec parse_generator_spec(const std::string& text, std::uint64_t default_seed) {
  GeneratorSpec spec;
  spec.seed = default_seed;
  double mu0 = spec.null_model.mu();
  double sigma0 = spec.null_model.sigma();
  for (const auto& item : split_top_level(text, ',')) {
    if (item.empty()) {
      continue;
    }
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ContractViolation(fmt::format("generator item '{}' is not key=value", item));
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "n") {
      spec.n = parse_value<std::size_t>(key, value);
    } else if (key == "seed") {
      spec.seed = parse_value<std::uint64_t>(key, value);
    } else if (key == "beta") {
      spec.beta = parse_list(key, value, ':');
    } else if (key == "mu0") {
      mu0 = parse_value<double>(key, value);
    } else if (key == "sigma0") {
      sigma0 = parse_value<double>(key, value);
    } else if (key == "alt") {
      std::vector<MixtureComponent> comps;
      for (const auto& comp : split_top_level(value, '/')) {
        const auto v = parse_list(key, comp, ':');
        if (v.size() != 3) {
          throw ContractViolation(fmt::format("generator key 'alt': expected w:mu:sigma, got '{}'", comp));
        }
        comps.push_back(MixtureComponent{v[0], v[1], v[2]});
      }
      spec.alt = AlternativeModel(std::move(comps));
    } else if (key == "covariates") {
      spec.covariates = CovariateLaw::parse(value);
    } else if (key == "convolve") {
      if (value != "true" && value != "false") {
        throw ContractViolation(fmt::format("generator key 'convolve': expected true/false, got '{}'", value));
      }
      spec.convolve = value == "true";
    } else {
      throw ContractViolation(fmt::format("unknown generator key '{}'", key));
    }
  }
  spec.null_model = NullModel(mu0, sigma0);
  spec.validate();
  return spec;
}

std::string generator_json(const GeneratorSpec& spec) {
  using nlohmann::json;
  json alt = json::array();
  for (const auto& c : spec.alt.components()) {
    alt.push_back({c.w, c.mu, c.sigma});
  }
  const json doc = {{"schema", kGeneratorSchema},
                    {"n", spec.n},
                    {"seed", spec.seed},
                    {"beta", spec.beta},
                    {"null", {spec.null_model.mu(), spec.null_model.sigma()}},
                    {"alt", alt},
                    {"convolve", spec.convolve},
                    {"covariates", spec.covariates.to_string()}};
  return doc.dump(2) + "\n";
}

std::vector<std::size_t> parse_benchmark_sizes(const std::string& text) {
  if (text.rfind("n=", 0) != 0) {
    throw ContractViolation(fmt::format("--benchmark expects n=N1,N2,..., got '{}'", text));
  }
  std::vector<std::size_t> sizes;
  for (const auto& part : split_top_level(text.substr(2), ',')) {
    const auto n = parse_value<std::size_t>("n", part);
    if (n == 0) {
      throw ContractViolation("--benchmark sizes must be positive");
    }
    sizes.push_back(n);
  }
  return sizes;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streaming sequential Monte Carlo for covariate-dependent multiple testing", "smcfdr"};
  app.require_subcommand(1);
  RunOptions opt;
  auto* run = app.add_subcommand("run", "Stream records through the sampler and write decisions, traces and summaries");
  run->add_option("--input", opt.input, "Records CSV (id,z,x1..xJ[,h]); '-' reads stdin");
  run->add_option("--output-dir", opt.output_dir, "Directory for output files")->capture_default_str();
  run->add_option("--config", opt.config_path, "Key-value config file");
  run->add_option("--set", opt.overrides, "Override a config key (key=value); repeatable");
  run->add_option("--seed", opt.seed, "Master seed");
  run->add_option("--particles", opt.particles, "Number of particles M");
  run->add_option("--ness-threshold", opt.ness_threshold, "Re-initialize when NESS falls below this");
  run->add_option("--decision-threshold", opt.decision_threshold, "Declare a signal above this posterior probability");
  run->add_flag("--streaming-decisions", opt.streaming_decisions, "Also write per-step provisional decisions");
  run->add_option("--generate", opt.generate, "Synthesize records: n=..,seed=..,beta=b0:b1:..,alt=w:mu:sigma/..");
  run->add_option("--benchmark", opt.benchmark, "Time single passes for n=N1,N2,...");
  run->add_option("--workers", opt.workers, "Worker threads");
  run->add_option("--warm-start", opt.warm_start, "Snapshot JSON to resample the initial cloud from");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    return run_command(opt, out);
  } catch (const std::exception& e) {
    err << "smcfdr: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace smcfdr
