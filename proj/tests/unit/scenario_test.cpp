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

#include <algorithm>

#include <nlohmann/json.hpp>

#include "iodsim/error.hpp"
#include "iodsim/scenario.hpp"
#include "test_support.hpp"

namespace iodsim {
namespace {

using test::load_ok;

std::size_t count_kind(const Application& a, const std::string& kind) {
  return static_cast<std::size_t>(std::count_if(a.log().begin(), a.log().end(),
                                                [&](const AppEvent& e) { return e.kind == kind; }));
}

ScenarioConfig with_battery(double joules) {
  auto j = nlohmann::json::parse(test::read_file(test::scenario_path("minimal")));
  j["drones"][0]["battery"] = {{"capacityJ", joules}};
  j["drones"][0]["peripherals"] = {{{"type", "generic"}, {"PowerConsumption", {0, 1, 3}}}};
  j["duration"] = 10;
  return test::parse_ok(j.dump());
}

TEST(Simulation, BuildOrderIsFixed) {
  Simulation sim(load_ok("minimal"));
  EXPECT_EQ(sim.build_steps(),
            (std::vector<std::string>{"static-config", "world", "layers", "entities",
                                      "net-devices", "mobility", "applications",
                                      "peripherals-energy", "backbone", "schedule"}));
  EXPECT_EQ(sim.drones().size(), 1u);
  EXPECT_EQ(sim.zsps().size(), 1u);
  EXPECT_EQ(sim.node_count(), 2u);
}

TEST(Simulation, TelemetryHandshakeCompletes) {
  Simulation sim(load_ok("minimal"));
  sim.run();
  auto client = sim.applications_of(0);
  auto server = sim.applications_of(1);
  ASSERT_EQ(client.size(), 1u);
  ASSERT_EQ(server.size(), 1u);
  EXPECT_EQ(count_kind(*client[0], "connected"), 1u);
  // One tick per second from t = 0 through t = 5.
  EXPECT_EQ(count_kind(*client[0], "tx"), 6u);
  // The last update is still in flight when the run ends.
  EXPECT_EQ(count_kind(*server[0], "rx"), 5u);
}

TEST(Simulation, SecondRunThrows) {
  Simulation sim(load_ok("minimal"));
  sim.run();
  try {
    sim.run();
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), Errc::engine_finished);
  }
}

TEST(Simulation, HoverEnergyMatchesClosedForm) {
  Simulation sim(load_ok("minimal"));
  sim.run();
  const auto& samples = sim.energy(0).samples();
  ASSERT_EQ(samples.size(), 50u);
  for (const auto& s : samples) EXPECT_NEAR(s.power.level, 46.26837175101147, 1e-9);
  EXPECT_GT(samples.front().power.radio, 0.0 - 1e-12);
  double consumed = 0.0;
  for (const auto& s : samples) consumed += std::max(0.0, s.power.total) * 0.1;
  EXPECT_NEAR(sim.energy(0).source().consumed(), consumed, 1e-6);
}

TEST(Simulation, DepletionFreezesAndSilencesTheDrone) {
  Simulation sim(with_battery(100.0));
  sim.run();
  const auto dep = sim.energy(0).depleted_at();
  ASSERT_TRUE(dep);
  // 46.27 W hover + 3 W peripheral: 4.927 J per 0.1 s tick, 21 ticks.
  EXPECT_NEAR(*dep, 2.1, 1e-9);
  const auto& drone = sim.drones().get(0);
  EXPECT_FALSE(drone.alive());
  for (const auto& p : drone.peripherals()) EXPECT_EQ(p->state(), PeripheralState::off);
  for (const auto& e : sim.applications_of(0)[0]->log()) {
    if (e.kind == "tx") EXPECT_LT(e.time, *dep);
  }
  EXPECT_EQ(sim.energy(0).samples().size(), 21u);
}

TEST(Simulation, StorageOccupancyBoundedAndConserved) {
  Simulation sim(load_ok("storage1mbps"));
  sim.run();
  const auto& drone = sim.drones().get(0);
  ASSERT_NE(drone.storage(), nullptr);
  for (const auto& s : sim.storage_samples(0)) EXPECT_LE(s.occupied, drone.storage()->capacity());
  std::uint64_t acquired = 0;
  for (const auto& p : drone.peripherals()) {
    if (auto* in = dynamic_cast<const InputPeripheral*>(p.get())) acquired += in->acquired_bits();
  }
  const auto* client = dynamic_cast<const StorageClient*>(sim.applications_of(0).front());
  ASSERT_NE(client, nullptr);
  EXPECT_EQ(acquired, drone.storage()->occupied() + client->acked_bits());
}

TEST(Simulation, TrajectorySamplesOnGrid) {
  Simulation sim(load_ok("scenario1"));
  const auto traj = sim.trajectory(0);
  ASSERT_GE(traj.size(), 2u);
  EXPECT_DOUBLE_EQ(traj[1].time - traj[0].time, 0.5);
  EXPECT_DOUBLE_EQ(traj.back().time, 80.0);
}

TEST(Simulation, SameSeedSameEvents) {
  auto cfg = load_ok("scenario3_relay");
  cfg.duration = 10;
  Simulation a(cfg), b(cfg);
  const auto sa = a.run();
  const auto sb = b.run();
  EXPECT_EQ(sa.events_processed, sb.events_processed);
  EXPECT_EQ(sa.events_per_interval, sb.events_per_interval);
  EXPECT_EQ(a.network().drops(), b.network().drops());
}

}  // namespace
}  // namespace iodsim
