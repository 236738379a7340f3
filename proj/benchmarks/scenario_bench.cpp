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
#include <fstream>
#include <sstream>

#include <benchmark/benchmark.h>

#include "iodsim/config.hpp"
#include "iodsim/scenario.hpp"

namespace {

iodsim::ScenarioConfig load(const std::string& name) {
  std::ifstream in(std::string(IODSIM_SOURCE_DIR) + "/scenarios/" + name + ".json");
  std::stringstream ss;
  ss << in.rdbuf();
  auto parsed = iodsim::parse_scenario(ss.str());
  if (!parsed.config) throw std::runtime_error(name + " does not validate");
  return *parsed.config;
}

void run_scenario(benchmark::State& state, const std::string& name) {
  const auto cfg = load(name);
  std::int64_t events = 0;
  for (auto _ : state) {
    iodsim::Simulation sim(cfg);
    events += static_cast<std::int64_t>(sim.run().events_processed);
  }
  state.SetItemsProcessed(events);
}

void BM_Scenario1(benchmark::State& state) { run_scenario(state, "scenario1"); }
BENCHMARK(BM_Scenario1)->Unit(benchmark::kMillisecond);

void BM_Storage1Mbps(benchmark::State& state) { run_scenario(state, "storage1mbps"); }
BENCHMARK(BM_Storage1Mbps)->Unit(benchmark::kMillisecond);

}  // namespace
