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

#include <chrono>
#include <ostream>
#include <string>
#include <vector>

#include "iodsim/scenario.hpp"

namespace iodsim {

inline constexpr const char* kReportFile = "report.xml";
inline constexpr const char* kProgressFile = "progress.log";
inline constexpr const char* kDebugLogFile = "iodsim.log";

/// ISO-8601 UTC with second resolution, e.g. 2026-01-02T03:04:05Z.
std::string iso8601_utc(std::chrono::system_clock::time_point t);

/// The end-of-run XML document. `wall_seconds` is only emitted when the
/// scenario enables ReportWallClock.
std::string render_xml(const Simulation& sim, const std::string& executed_at);
void write_xml(const Simulation& sim, const std::string& path, const std::string& executed_at);

/// `<layer>-<host>-<dev>.tr` with 1-based host and device numbers.
std::string trace_filename(const std::string& layer, std::size_t host, std::size_t dev);

/// One trace record:
///   <t|r> <time> <proto> <src>:<sport> > <dst>:<dport> len=<bytes> uid=<uid> [rx=<dBm>]
std::string trace_line(const PacketRecord& r);

/// Writes report.xml plus one trace and one pcap per device that carried
/// traffic. Returns the written file names, relative to `dir`.
std::vector<std::string> write_results(const Simulation& sim, const std::string& dir,
                                       const std::string& executed_at);

/// Per-second status lines, streamed while the engine runs.
class ProgressLog {
 public:
  explicit ProgressLog(std::vector<std::ostream*> sinks) : sinks_(std::move(sinks)) {}

  void start(const std::string& scenario);
  void interval(const IntervalReport& r);
  void finish(const RunStats& stats);

  static std::string format_line(const IntervalReport& r);

 private:
  void emit(const std::string& line);

  std::vector<std::ostream*> sinks_;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace iodsim
