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
#include <random>

#include <benchmark/benchmark.h>

#include "iodsim/mobility.hpp"

namespace {

std::vector<iodsim::InterestPoint> plan(std::size_t n, unsigned level) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 200.0);
  std::vector<iodsim::InterestPoint> p;
  for (std::size_t i = 0; i < n; ++i) p.push_back({{u(rng), u(rng), u(rng) / 4}, level, 0.0});
  return p;
}

void BM_CurvePoint(benchmark::State& state) {
  const auto pts = plan(static_cast<std::size_t>(state.range(0)), 3);
  const iodsim::TrajectoryGenerator gen(pts);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen(t));
    t = t > 0.999 ? 0.0 : t + 1e-3;
  }
}
BENCHMARK(BM_CurvePoint)->Arg(4)->Arg(8)->Arg(20);

void BM_GenerateCurve(benchmark::State& state) {
  const auto pts = plan(8, 2);
  const double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iodsim::generate_curve(pts, step));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateCurve)->Arg(100)->Arg(1000)->Arg(10000);

}  // namespace
