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
#include <benchmark/benchmark.h>

#include "iodsim/engine.hpp"

namespace {

// Self-rescheduling chains keep the queue at a steady depth.
void BM_EngineDispatch(benchmark::State& state) {
  const auto depth = static_cast<int>(state.range(0));
  std::int64_t events = 0;
  for (auto _ : state) {
    iodsim::Engine engine(1);
    std::function<void()> tick = [&] {
      engine.schedule(0.001, tick);
    };
    for (int i = 0; i < depth; ++i) engine.schedule(i * 1e-6, tick);
    const auto stats = engine.run(1.0);
    events += static_cast<std::int64_t>(stats.events_processed);
  }
  state.SetItemsProcessed(events);
}
BENCHMARK(BM_EngineDispatch)->Arg(1)->Arg(64)->Arg(4096);

void BM_EngineCancel(benchmark::State& state) {
  for (auto _ : state) {
    iodsim::Engine engine(1);
    std::vector<iodsim::EventId> ids;
    for (int i = 0; i < 10000; ++i) ids.push_back(engine.schedule(i * 1e-4, [] {}));
    for (std::size_t i = 0; i < ids.size(); i += 2) engine.cancel(ids[i]);
    benchmark::DoNotOptimize(engine.run(2.0));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_EngineCancel);

}  // namespace
