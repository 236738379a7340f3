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
#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "iodsim/config.hpp"
#include "iodsim/error.hpp"
#include "iodsim/report.hpp"
#include "iodsim/scenario.hpp"

namespace iodsim::test {

namespace fs = std::filesystem;

inline fs::path source_dir() { return IODSIM_SOURCE_DIR; }
inline fs::path scenario_path(const std::string& name) {
  return source_dir() / "scenarios" / (name + ".json");
}
inline fs::path docs_path(const std::string& name) { return source_dir() / "docs" / name; }

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("iodsim-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline ScenarioConfig parse_ok(const std::string& text) {
  auto r = parse_scenario(text);
  if (!r.config) {
    std::string msg = "scenario rejected:";
    for (const auto& d : r.report.errors) msg += " " + d.path + ": " + d.message + ";";
    throw std::runtime_error(msg);
  }
  return *r.config;
}

inline ScenarioConfig load_ok(const std::string& name) {
  return parse_ok(read_file(scenario_path(name)));
}

struct RunOutput {
  RunStats stats;
  std::string progress;
};

/// Runs the scenario and writes every artifact into `dir`, as the CLI does.
inline RunOutput run_into(const ScenarioConfig& cfg, const fs::path& dir,
                          const std::string& executed_at = "2026-01-01T00:00:00Z") {
  fs::create_directories(dir);
  std::ostringstream progress;
  ProgressLog log({&progress});
  Simulation sim(cfg);
  sim.engine().set_progress_observer([&](const IntervalReport& r) { log.interval(r); });
  log.start(cfg.name);
  RunOutput out{sim.run(), {}};
  log.finish(out.stats);
  write_results(sim, dir.string(), executed_at);
  out.progress = progress.str();
  write_file(dir / kProgressFile, out.progress);
  return out;
}

using CsvRow = std::map<std::string, std::string>;

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  const auto header = split(line, ',');
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    CsvRow row;
    for (std::size_t i = 0; i < header.size(); ++i) {
      row[header[i]] = i < cells.size() ? cells[i] : "";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline double num(const CsvRow& r, const std::string& key) { return std::stod(r.at(key)); }

}  // namespace iodsim::test
