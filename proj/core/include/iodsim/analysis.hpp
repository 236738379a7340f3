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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iodsim/geometry.hpp"

namespace iodsim {

enum class Kpi { power, rssi, throughput, storage, latency, plr, perf };

std::optional<Kpi> parse_kpi(std::string_view name);
std::string_view to_string(Kpi k);
const std::vector<std::string>& kpi_names();

struct AnalyzeOptions {
  Seconds window = 1.0;  ///< throughput window
};

/// Header line (without newline) of the CSV produced for `k`.
std::string_view csv_header(Kpi k);

/// Reads `<dir>/report.xml` (and progress.log for perf, when present) and
/// returns the CSV text. Throws MissingArtifact when the report is absent.
std::string analyze(const std::string& dir, Kpi k, const AnalyzeOptions& opts = {});

}  // namespace iodsim
