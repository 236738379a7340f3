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

#include <functional>
#include <optional>
#include <vector>

#include "iodsim/engine.hpp"
#include "iodsim/entities.hpp"

namespace iodsim {

struct PowerBreakdown {
  double level = 0.0;
  double vertical = 0.0;
  double drag = 0.0;
  double peripherals = 0.0;
  double radio = 0.0;
  double total = 0.0;

  double mechanical() const { return level + vertical + drag; }
};

/// Induced velocity in hover, sqrt(W / (2 rho A)).
double hover_speed(const Mechanics& m);

/// Rotary-wing propulsion power for velocity v. Only the level, vertical
/// and drag parts are filled; total is their sum. Vertical power is
/// negative while descending.
PowerBreakdown mechanical_power(const Vec3& v, const Mechanics& m);

/// Joule reservoir at nominal voltage.
class EnergySource {
 public:
  /// Throws ValidationError unless energy >= 0 and the interval is > 0.
  EnergySource(double initial_joules, Seconds sampling_interval = 0.1);

  /// J = V * mAh * 3.6
  static double joules_from_cell(double volts, double milliamp_hours);

  double initial() const { return initial_; }
  double remaining() const { return initial_ - consumed_ > 0.0 ? initial_ - consumed_ : 0.0; }
  double consumed() const { return consumed_; }
  Seconds sampling_interval() const { return dt_; }
  bool depleted() const { return initial_ - consumed_ <= 0.0; }

  /// Drains power * interval; negative power is treated as zero draw.
  double drain(double watts);

 private:
  double initial_;
  double consumed_ = 0.0;
  Seconds dt_;
};

struct EnergySample {
  Seconds time = 0.0;
  PowerBreakdown power;
  double remaining = 0.0;
};

/// Periodic drain loop for one drone.
class EnergyModel {
 public:
  using PowerFn = std::function<PowerBreakdown(Seconds)>;
  using DepletionFn = std::function<void(Seconds)>;

  EnergyModel(Engine& engine, EnergySource source, PowerFn power, DepletionFn on_depleted);

  /// Schedules the first tick at one sampling interval.
  void start();

  const EnergySource& source() const { return source_; }
  const std::vector<EnergySample>& samples() const { return samples_; }
  std::optional<Seconds> depleted_at() const { return depleted_at_; }

 private:
  void tick();

  Engine& engine_;
  EnergySource source_;
  PowerFn power_;
  DepletionFn on_depleted_;
  std::vector<EnergySample> samples_;
  std::optional<Seconds> depleted_at_;
  std::uint64_t ticks_ = 0;
  Seconds origin_ = 0.0;
};

}  // namespace iodsim
