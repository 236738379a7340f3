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
#include "iodsim/energy.hpp"

#include <algorithm>
#include <cmath>

namespace iodsim {

double hover_speed(const Mechanics& m) {
  return std::sqrt(m.weight() / (2.0 * m.air_density() * m.rotor_disk_area()));
}

PowerBreakdown mechanical_power(const Vec3& v, const Mechanics& m) {
  const double w = m.weight();
  const double rho = m.air_density();
  const double area = m.rotor_disk_area();
  const double vh = hover_speed(m);
  const double omega = v.x * v.x + v.y * v.y;
  const double vh4 = vh * vh * vh * vh;

  PowerBreakdown p;
  p.level = w * w / (std::sqrt(2.0) * rho * area) /
            std::sqrt(omega + std::sqrt(omega * omega + 4.0 * vh4));
  p.vertical = w * v.z;
  p.drag = 0.125 * m.drag_coefficient() * rho * area * std::pow(omega, 1.5);
  p.total = p.level + p.vertical + p.drag;
  return p;
}

EnergySource::EnergySource(double initial_joules, Seconds sampling_interval)
    : initial_(initial_joules), dt_(sampling_interval) {
  if (!std::isfinite(initial_joules) || initial_joules < 0.0) {
    throw SimError(Errc::validation_error, "battery energy must be >= 0");
  }
  if (!std::isfinite(sampling_interval) || sampling_interval <= 0.0) {
    throw SimError(Errc::validation_error, "battery samplingInterval must be > 0");
  }
}

double EnergySource::joules_from_cell(double volts, double milliamp_hours) {
  return volts * milliamp_hours * 3.6;
}

double EnergySource::drain(double watts) {
  if (watts > 0.0) consumed_ += watts * dt_;
  return remaining();
}

EnergyModel::EnergyModel(Engine& engine, EnergySource source, PowerFn power,
                         DepletionFn on_depleted)
    : engine_(engine),
      source_(source),
      power_(std::move(power)),
      on_depleted_(std::move(on_depleted)) {}

void EnergyModel::start() {
  origin_ = engine_.now();
  engine_.schedule(source_.sampling_interval(), [this] { tick(); });
}

void EnergyModel::tick() {
  ++ticks_;
  const Seconds now = engine_.now();
  EnergySample s;
  s.time = now;
  s.power = power_(now);
  s.remaining = source_.drain(s.power.total);
  samples_.push_back(s);

  if (source_.depleted()) {
    depleted_at_ = now;
    if (on_depleted_) on_depleted_(now);
    return;
  }
  // Absolute grid: tick k fires at origin + k * dt without drift.
  const Seconds next = origin_ + static_cast<double>(ticks_ + 1) * source_.sampling_interval();
  engine_.schedule(std::max(0.0, next - now), [this] { tick(); });
}

}  // namespace iodsim
