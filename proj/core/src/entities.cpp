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
#include "iodsim/entities.hpp"

#include <cmath>

namespace iodsim {

namespace {

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw SimError(Errc::invalid_mechanics, std::string(what) + " must be positive");
  }
}

}  // namespace

Mechanics::Mechanics(double mass, double rotor_disk_area, double drag_coefficient,
                     double air_density) {
  set_mass(mass);
  set_rotor_disk_area(rotor_disk_area);
  set_drag_coefficient(drag_coefficient);
  set_air_density(air_density);
}

void Mechanics::set_mass(double mass) {
  if (!std::isfinite(mass) || mass <= 0.0) {
    throw SimError(Errc::non_positive_mass, "mass must be positive");
  }
  mass_ = mass;
  weight_ = mass * kGravity;
}

void Mechanics::set_rotor_disk_area(double area) {
  require_positive(area, "rotor disk area");
  area_ = area;
}

void Mechanics::set_drag_coefficient(double cd0) {
  if (!std::isfinite(cd0) || cd0 < 0.0) {
    throw SimError(Errc::invalid_mechanics, "drag coefficient must be >= 0");
  }
  cd0_ = cd0;
}

void Mechanics::set_air_density(double rho) {
  require_positive(rho, "air density");
  rho_ = rho;
}

std::string_view to_string(EntityKind k) {
  switch (k) {
    case EntityKind::drone:
      return "drone";
    case EntityKind::zsp:
      return "zsp";
    case EntityKind::remote:
      return "remote";
  }
  return "?";
}

Peripheral& Drone::add_peripheral(std::unique_ptr<Peripheral> p) {
  if (auto* s = dynamic_cast<StoragePeripheral*>(p.get())) {
    if (storage_ != nullptr) {
      throw SimError(Errc::validation_error, "a drone carries at most one storage peripheral");
    }
    storage_ = s;
  }
  peripherals_.push_back(std::move(p));
  return *peripherals_.back();
}

}  // namespace iodsim
