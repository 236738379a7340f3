// Copyright 2026 The IoD Simulator Authors
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
#include "iodsim/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "iodsim/analysis.hpp"
#include "iodsim/config.hpp"
#include "iodsim/error.hpp"
#include "iodsim/report.hpp"
#include "iodsim/scenario.hpp"

namespace iodsim::cli {

namespace {

void print_report(const ValidationReport& rep, std::ostream& err) {
  for (const auto& d : rep.errors) err << "error " << (d.path.empty() ? "/" : d.path) << ": " << d.message << '\n';
  for (const auto& d : rep.warnings) err << "warning " << (d.path.empty() ? "/" : d.path) << ": " << d.message << '\n';
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Overrides are applied to the document so they go through validation.
std::string apply_overrides(const std::string& text, const RunOptions& o) {
  if (!o.seed && !o.duration && !o.results && !o.dry_run) return text;
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return text;  // parse_scenario reports the position
  }
  if (!doc.is_object()) return text;
  if (o.seed) doc["seed"] = *o.seed;
  if (o.duration) doc["duration"] = *o.duration;
  if (o.results) doc["resultsPath"] = *o.results;
  if (o.dry_run) doc["dryRun"] = true;
  return doc.dump();
}

}  // namespace

int cmd_run(const std::string& scenario, const RunOptions& opts, std::ostream& out,
            std::ostream& err) {
  const auto text = read_file(scenario);
  if (!text) {
    err << "IoError: cannot read " << scenario << '\n';
    return kSyntax;
  }
  ParseResult parsed;
  try {
    parsed = parse_scenario(apply_overrides(*text, opts));
  } catch (const SimError& e) {
    err << e.what() << '\n';
    return kSyntax;
  }
  print_report(parsed.report, err);
  if (!parsed.config) return kInvalid;
  const ScenarioConfig& cfg = *parsed.config;
  if (cfg.dry_run) {
    out << "scenario '" << cfg.name << "' is valid\n";
    return kOk;
  }

  try {
    namespace fs = std::filesystem;
    const fs::path dir = cfg.results_path;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw SimError(Errc::io_error, "cannot create " + dir.string() + ": " + ec.message());

    std::ofstream progress_file;
    std::vector<std::ostream*> sinks{&out};
    std::unique_ptr<DebugLog> log;
    if (cfg.log_on_file) {
      progress_file.open(dir / kProgressFile, std::ios::trunc);
      if (!progress_file) throw SimError(Errc::io_error, "cannot write progress log");
      sinks.push_back(&progress_file);
      if (!cfg.log_components.empty()) {
        log = std::make_unique<DebugLog>(cfg.log_components, (dir / kDebugLogFile).string());
      }
    }
    const std::string executed_at = iso8601_utc(std::chrono::system_clock::now());
    Simulation sim(cfg, log.get());
    ProgressLog progress(sinks);
    sim.engine().set_progress_observer([&](const IntervalReport& r) { progress.interval(r); });
    progress.start(cfg.name);
    const RunStats& stats = sim.run();
    progress.finish(stats);
    const auto files = write_results(sim, dir.string(), executed_at);
    out << fmt::format("wrote {} files to {}\n", files.size() + (cfg.log_on_file ? 1 : 0),
                       dir.string());
  } catch (const SimError& e) {
    err << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

int cmd_validate(const std::string& scenario, std::ostream& out, std::ostream& err) {
  RunOptions o;
  o.dry_run = true;
  return cmd_run(scenario, o, out, err);
}

int cmd_analyze(const std::string& dir, const std::string& kpi, double window,
                const std::optional<std::string>& out_file, std::ostream& out,
                std::ostream& err) {
  const auto k = parse_kpi(kpi);
  if (!k) {
    err << "unknown KPI '" << kpi << "'\n";
    return kSyntax;
  }
  try {
    const std::string csv = analyze(dir, *k, AnalyzeOptions{window});
    if (out_file) {
      std::ofstream f(*out_file, std::ios::binary | std::ios::trunc);
      if (!f) throw SimError(Errc::io_error, "cannot write " + *out_file);
      f << csv;
    } else {
      out << csv;
    }
  } catch (const SimError& e) {
    err << e.what() << '\n';
    return e.code() == Errc::missing_artifact ? kInvalid : kRuntime;
  }
  return kOk;
}

int main(int argc, char** argv) {
  CLI::App app{"Internet-of-Drones discrete-event simulator"};
  app.require_subcommand(1);

  std::string scenario;
  RunOptions ro;
  auto* run = app.add_subcommand("run", "Execute a scenario file");
  run->add_option("scenario", scenario, "Scenario JSON")->required();
  run->add_option("--seed", ro.seed, "Override the scenario seed");
  run->add_option("--duration", ro.duration, "Override the duration in seconds");
  run->add_option("--results", ro.results, "Override resultsPath");
  run->add_flag("--dry-run", ro.dry_run, "Validate only, write nothing");

  std::string vscenario;
  auto* validate = app.add_subcommand("validate", "Check a scenario without running it");
  validate->add_option("scenario", vscenario, "Scenario JSON")->required();

  std::string dir, kpi;
  double window = 1.0;
  std::optional<std::string> out_file;
  auto* an = app.add_subcommand("analyze", "Compute a KPI from a results directory as CSV");
  an->add_option("results", dir, "Results directory")->required();
  an->add_option("--kpi", kpi, "power, rssi, throughput, storage, latency, plr or perf")
      ->required();
  an->add_option("--window", window, "Throughput window in seconds");
  an->add_option("--out", out_file, "Write the CSV here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kSyntax;
  }
  if (*run) return cmd_run(scenario, ro, std::cout, std::cerr);
  if (*validate) return cmd_validate(vscenario, std::cout, std::cerr);
  return cmd_analyze(dir, kpi, window, out_file, std::cout, std::cerr);
}

}  // namespace iodsim::cli
