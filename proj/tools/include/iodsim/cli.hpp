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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace iodsim::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kSyntax = 2, kRuntime = 3 };

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::optional<std::string> results;  ///< replaces resultsPath
  bool dry_run = false;
};

int cmd_run(const std::string& scenario, const RunOptions& opts, std::ostream& out,
            std::ostream& err);
int cmd_validate(const std::string& scenario, std::ostream& out, std::ostream& err);
/// Exit 1 on a missing artifact, 2 on an unknown KPI.
int cmd_analyze(const std::string& dir, const std::string& kpi, double window,
                const std::optional<std::string>& out_file, std::ostream& out, std::ostream& err);

/// Full command line, including parsing of argv.
int main(int argc, char** argv);

}  // namespace iodsim::cli
