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
#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "iodsim/cli.hpp"
#include "test_support.hpp"

namespace iodsim {
namespace {

namespace fs = std::filesystem;
using cli::RunOptions;

struct Captured {
  std::ostringstream out, err;
};

std::string minimal_with(const std::function<void(nlohmann::json&)>& edit) {
  auto j = nlohmann::json::parse(test::read_file(test::scenario_path("minimal")));
  edit(j);
  return j.dump(2);
}

TEST(Cli, RunWritesResults) {
  test::TempDir dir("cli");
  Captured c;
  RunOptions o;
  o.results = (dir / "out").string();
  o.duration = 2.0;
  ASSERT_EQ(cli::cmd_run(test::scenario_path("minimal").string(), o, c.out, c.err), cli::kOk)
      << c.err.str();
  EXPECT_TRUE(fs::exists(dir / "out" / "report.xml"));
  EXPECT_NE(c.out.str().find("[2.000 s]"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "out" / "progress.log"));  // logOnFile is off
}

TEST(Cli, DryRunWritesNothing) {
  test::TempDir dir("cli");
  Captured c;
  RunOptions o;
  o.results = (dir / "out").string();
  o.dry_run = true;
  EXPECT_EQ(cli::cmd_run(test::scenario_path("minimal").string(), o, c.out, c.err), cli::kOk);
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_NE(c.out.str().find("is valid"), std::string::npos);
}

TEST(Cli, ValidateCorpus) {
  for (const auto& e : fs::directory_iterator(test::source_dir() / "scenarios")) {
    if (e.path().extension() != ".json") continue;
    Captured c;
    EXPECT_EQ(cli::cmd_validate(e.path().string(), c.out, c.err), cli::kOk) << e.path();
    EXPECT_EQ(c.err.str().find("error"), std::string::npos) << c.err.str();
  }
}

TEST(Cli, ExitCodes) {
  test::TempDir dir("cli");
  const auto invalid = dir / "invalid.json";
  test::write_file(invalid, minimal_with([](auto& j) { j["duration"] = -1; }));
  const auto syntax = dir / "syntax.json";
  test::write_file(syntax, "{\"name\": }");
  const auto runtime = dir / "runtime.json";
  test::write_file(runtime,
                   minimal_with([](auto& j) { j["resultsPath"] = "/proc/iodsim-denied/x"; }));

  Captured a, b, c, d;
  EXPECT_EQ(cli::cmd_run(invalid.string(), {}, a.out, a.err), cli::kInvalid);
  EXPECT_NE(a.err.str().find("error /duration"), std::string::npos) << a.err.str();
  EXPECT_EQ(cli::cmd_run(syntax.string(), {}, b.out, b.err), cli::kSyntax);
  EXPECT_NE(b.err.str().find("SyntaxError: line 1"), std::string::npos) << b.err.str();
  EXPECT_EQ(cli::cmd_run(runtime.string(), {}, c.out, c.err), cli::kRuntime);
  EXPECT_NE(c.err.str().find("IoError"), std::string::npos) << c.err.str();
  EXPECT_EQ(cli::cmd_run((dir / "absent.json").string(), {}, d.out, d.err), cli::kSyntax);
}

TEST(Cli, SeedOverrideChangesRandomOutcomes) {
  test::TempDir dir("cli");
  auto run = [&](std::uint64_t seed, const std::string& sub) {
    Captured c;
    RunOptions o;
    o.seed = seed;
    o.duration = 20.0;
    o.results = (dir / sub).string();
    EXPECT_EQ(cli::cmd_run(test::scenario_path("scenario3_relay").string(), o, c.out, c.err),
              cli::kOk);
    auto xml = test::read_file(dir / sub / "report.xml");
    xml.erase(0, xml.find("<duration"));
    return xml;
  };
  EXPECT_EQ(run(3, "a"), run(3, "b"));
  EXPECT_NE(run(3, "c"), run(4, "d"));
}

TEST(Cli, AnalyzeCodes) {
  test::TempDir dir("cli");
  Captured a, b, c;
  EXPECT_EQ(cli::cmd_analyze(dir.str(), "power", 1.0, std::nullopt, a.out, a.err), cli::kInvalid);
  EXPECT_EQ(cli::cmd_analyze(dir.str(), "nonsense", 1.0, std::nullopt, b.out, b.err),
            cli::kSyntax);

  RunOptions o;
  o.results = (dir / "r").string();
  o.duration = 2.0;
  ASSERT_EQ(cli::cmd_run(test::scenario_path("minimal").string(), o, c.out, c.err), cli::kOk);
  Captured d, e;
  const auto out_file = (dir / "power.csv").string();
  EXPECT_EQ(cli::cmd_analyze((dir / "r").string(), "power", 1.0, out_file, d.out, d.err),
            cli::kOk);
  EXPECT_TRUE(d.out.str().empty());
  const auto rows = test::parse_csv(test::read_file(out_file));
  EXPECT_EQ(rows.size(), 20u);
  EXPECT_EQ(cli::cmd_analyze((dir / "r").string(), "throughput", -1.0, std::nullopt, e.out,
                             e.err),
            cli::kRuntime);
}

TEST(Cli, ArgumentErrors) {
  const char* none[] = {"iodsim"};
  EXPECT_EQ(cli::main(1, const_cast<char**>(none)), cli::kSyntax);
  const char* bad[] = {"iodsim", "run"};
  EXPECT_EQ(cli::main(2, const_cast<char**>(bad)), cli::kSyntax);
  const char* help[] = {"iodsim", "--help"};
  EXPECT_EQ(cli::main(2, const_cast<char**>(help)), cli::kOk);
}

}  // namespace
}  // namespace iodsim
