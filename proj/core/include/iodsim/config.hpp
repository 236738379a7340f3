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

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "iodsim/channel.hpp"
#include "iodsim/mobility.hpp"
#include "iodsim/network.hpp"
#include "iodsim/world.hpp"

namespace iodsim {

struct Diagnostic {
  std::string path;  ///< JSON pointer
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;
  bool ok() const { return errors.empty(); }
};

struct StaticConfig {
  Seconds mobility_update_interval = 0.01;
  Seconds trajectory_sampling_interval = 1.0;
  double backbone_data_rate = 100e6;
  Seconds backbone_delay = 0.001;
  std::size_t mss = 1380;
  std::size_t reliable_window = 8;
  Seconds retransmission_timeout = 0.2;
  Seconds connection_timeout = 5.0;
  RateTable snr_table = default_rate_table();
  bool report_wall_clock = false;
};

struct LossConfig {
  std::string type = "friis";  ///< friis, logDistance, okumuraHata, hybridBuildings
  double exponent = 3.0;
  double reference_loss = 46.6777;
  double reference_distance = 1.0;
  std::optional<double> bs_height;
  std::optional<double> ue_height;
  std::shared_ptr<LossConfig> base;  ///< hybridBuildings only
  WallLossTable wall_losses = default_wall_losses();
};

struct PhyConfig {
  std::string type = "wifi";  ///< wifi or lte
  RadioParams radio;
  LossConfig loss;
  std::optional<double> fixed_rate_bps;
  bool probabilistic_loss = false;
};

struct MacConfig {
  std::string type = "wifi";
};

struct NetConfig {
  std::string type = "ipv4";
  Ipv4 address = 0x0A010000u;
  Ipv4 mask = 0xFFFFFF00u;
};

struct NetDeviceConfig {
  std::size_t stack = 0;
  DeviceRole role = DeviceRole::station;
  RadioEnergy energy;
};

struct MobilityConfig {
  std::string type = "constantPosition";
  Vec3 position;
  std::vector<InterestPoint> plan;
  double acceleration = 0.0;
  double max_speed = 0.0;
  std::vector<double> coefficients;
  double curve_step = kDefaultCurveStep;
};

struct MechanicsConfig {
  double mass = 1.0;
  double rotor_disk_area = 0.18;
  double drag_coefficient = 0.08;
  double air_density = 1.225;
};

struct BatteryConfig {
  double joules = 199800.0;  // 11.1 V, 5000 mAh
  Seconds sampling_interval = 0.1;
};

struct PeripheralConfig {
  std::string type = "generic";  ///< generic, storage, input
  std::array<double, 3> power{0.0, 0.0, 0.0};
  std::uint64_t capacity = 0;
  std::optional<std::uint64_t> initial_remaining;
  double data_rate = 0.0;
  Seconds interval = 1.0;
  bool has_storage = false;
  std::vector<std::size_t> roi_trigger;
};

struct AppConfig {
  std::string type;
  Seconds start = 0.0;
  std::optional<Seconds> stop;
  // telemetry
  std::optional<Ipv4> destination;
  std::uint16_t port = 0;
  Seconds interval = 1.0;
  bool free_data = false;
  bool store_data = false;
  // generic traffic
  Ipv4 address = 0x7F000001u;
  std::size_t payload_size = 65470;
  double frequency = 1.0;
  bool echo = true;
  // nat
  std::size_t internal_device = 0;
  std::size_t external_device = 1;
};

struct DroneConfig {
  MechanicsConfig mechanics;
  MobilityConfig mobility;
  BatteryConfig battery;
  std::vector<PeripheralConfig> peripherals;
  std::vector<NetDeviceConfig> net_devices;
  std::vector<AppConfig> applications;
};

struct ZspConfig {
  MobilityConfig mobility;
  std::vector<NetDeviceConfig> net_devices;
  std::vector<AppConfig> applications;
};

struct RemoteConfig {
  std::vector<AppConfig> applications;
};

struct WorldConfig {
  std::vector<Building> buildings;
  std::vector<Box3> regions;
};

struct ScenarioConfig {
  std::string name;
  bool dry_run = false;
  std::string results_path;
  bool log_on_file = false;
  Seconds duration = 0.0;
  std::uint64_t seed = 1;
  StaticConfig static_config;
  WorldConfig world;
  std::vector<PhyConfig> phy;
  std::vector<MacConfig> mac;
  std::vector<NetConfig> net;
  std::vector<DroneConfig> drones;
  std::vector<ZspConfig> zsps;
  std::vector<RemoteConfig> remotes;
  std::vector<std::string> log_components;
};

struct ParseResult {
  std::optional<ScenarioConfig> config;  ///< set iff report.ok()
  ValidationReport report;
};

/// Decodes and validates a scenario. Throws SyntaxError (with line and
/// column in the message) when the text is not JSON.
ParseResult parse_scenario(std::string_view text);

/// Reads a file and parses it. Throws IoError when it cannot be read.
ParseResult load_scenario(const std::string& path);

/// Canonical JSON: fixed key order with every default materialized.
nlohmann::ordered_json to_json(const ScenarioConfig& cfg);

/// Module names accepted in logComponents.
const std::vector<std::string>& known_log_components();

}  // namespace iodsim
