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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iodsim/apps.hpp"
#include "iodsim/config.hpp"
#include "iodsim/energy.hpp"
#include "iodsim/entities.hpp"
#include "iodsim/log.hpp"
#include "iodsim/world.hpp"

namespace iodsim {

struct StorageSample {
  Seconds time = 0.0;
  std::uint64_t occupied = 0;
};

struct TrajectoryPoint {
  Seconds time = 0.0;
  Vec3 position;
};

/// A validated scenario turned into live objects, ready to run once.
class Simulation {
 public:
  /// Builds every entity in the fixed order listed by build_steps().
  /// Throws BuildError naming the offending element.
  explicit Simulation(ScenarioConfig cfg, DebugLog* log = nullptr);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs for the configured duration. Throws EngineFinished on a second call.
  const RunStats& run();

  const ScenarioConfig& config() const { return cfg_; }
  Engine& engine() { return engine_; }
  const Engine& engine() const { return engine_; }
  const World& world() const { return world_; }
  Network& network() { return *net_; }
  const Network& network() const { return *net_; }

  const Registry<Drone>& drones() const { return drones_; }
  const Registry<Zsp>& zsps() const { return zsps_; }
  const Registry<Remote>& remotes() const { return remotes_; }
  const Node& node(std::size_t global_id) const { return *nodes_.at(global_id); }
  std::size_t node_count() const { return nodes_.size(); }

  const std::vector<std::string>& build_steps() const { return steps_; }
  const std::vector<std::unique_ptr<Application>>& applications() const { return apps_; }
  std::vector<const Application*> applications_of(std::size_t global_id) const;

  const EnergyModel& energy(std::size_t drone) const { return *energy_.at(drone); }
  const std::vector<StorageSample>& storage_samples(std::size_t drone) const {
    return storage_samples_.at(drone);
  }
  /// Positions at every TrajectorySamplingInterval plus the final instant.
  std::vector<TrajectoryPoint> trajectory(std::size_t drone) const;

  bool alive(std::size_t global_id, Seconds t) const;
  const std::optional<RunStats>& stats() const { return stats_; }

 private:
  void build();
  void schedule_mobility_tick(std::size_t drone, std::uint64_t k);
  void schedule_acquisition(std::size_t drone, InputPeripheral* p, std::uint64_t k);
  PowerBreakdown drone_power(std::size_t drone, Seconds t);
  void on_depleted(std::size_t drone, Seconds t);
  void debug(std::string_view component, const std::string& msg);

  ScenarioConfig cfg_;
  DebugLog* log_;
  Engine engine_;
  World world_;
  std::unique_ptr<Network> net_;
  Registry<Drone> drones_;
  Registry<Zsp> zsps_;
  Registry<Remote> remotes_;
  std::vector<Node*> nodes_;
  std::vector<std::unique_ptr<Application>> apps_;
  std::vector<std::unique_ptr<EnergyModel>> energy_;
  std::vector<std::vector<StorageSample>> storage_samples_;
  struct RadioBusy {
    double tx = 0.0;
    double rx = 0.0;
  };
  std::vector<RadioBusy> last_busy_;
  std::vector<std::string> steps_;
  std::optional<RunStats> stats_;
};

}  // namespace iodsim
