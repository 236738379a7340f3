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

#include "iodsim/error.hpp"
#include "iodsim/mobility.hpp"
#include "iodsim/peripherals.hpp"

namespace iodsim {

inline constexpr double kGravity = 9.81;
inline constexpr double kDefaultAirDensity = 1.225;

/// Rotary-wing mechanical constants. The weight is re-derived on every
/// mass update.
class Mechanics {
 public:
  Mechanics() = default;
  /// Throws NonPositiveMass or InvalidMechanics.
  Mechanics(double mass, double rotor_disk_area, double drag_coefficient,
            double air_density = kDefaultAirDensity);

  void set_mass(double mass);
  void set_rotor_disk_area(double area);
  void set_drag_coefficient(double cd0);
  void set_air_density(double rho);

  double mass() const { return mass_; }
  double weight() const { return weight_; }
  double rotor_disk_area() const { return area_; }
  double drag_coefficient() const { return cd0_; }
  double air_density() const { return rho_; }

 private:
  double mass_ = 1.0;
  double weight_ = kGravity;
  double area_ = 0.18;
  double cd0_ = 0.08;
  double rho_ = kDefaultAirDensity;
};

enum class EntityKind { drone, zsp, remote };
std::string_view to_string(EntityKind k);

/// Common part of drones, ZSPs and remotes.
class Node {
 public:
  Node(EntityKind kind, std::size_t index) : kind_(kind), index_(index) {}
  virtual ~Node() = default;

  EntityKind kind() const { return kind_; }
  /// Position in the per-kind registry.
  std::size_t index() const { return index_; }
  /// Run-wide id: drones first, then ZSPs, then remotes.
  std::size_t global_id() const { return global_id_; }
  void set_global_id(std::size_t id) { global_id_ = id; }

  /// Null for remotes.
  MobilityModel* mobility() const { return mobility_.get(); }
  void set_mobility(std::unique_ptr<MobilityModel> m) { mobility_ = std::move(m); }
  Vec3 position(Seconds t) const { return mobility_ ? mobility_->state_at(t).position : Vec3{}; }

  bool alive() const { return !depleted_at_.has_value(); }
  std::optional<Seconds> depleted_at() const { return depleted_at_; }
  void mark_depleted(Seconds t) { depleted_at_ = t; }

 private:
  EntityKind kind_;
  std::size_t index_;
  std::size_t global_id_ = 0;
  std::unique_ptr<MobilityModel> mobility_;
  std::optional<Seconds> depleted_at_;
};

class Drone final : public Node {
 public:
  explicit Drone(std::size_t index) : Node(EntityKind::drone, index) {}

  Mechanics& mechanics() { return mechanics_; }
  const Mechanics& mechanics() const { return mechanics_; }

  /// Only one storage peripheral may be installed; a second one throws
  /// ValidationError.
  Peripheral& add_peripheral(std::unique_ptr<Peripheral> p);
  const std::vector<std::unique_ptr<Peripheral>>& peripherals() const { return peripherals_; }
  StoragePeripheral* storage() const { return storage_; }

 private:
  Mechanics mechanics_;
  std::vector<std::unique_ptr<Peripheral>> peripherals_;
  StoragePeripheral* storage_ = nullptr;
};

class Zsp final : public Node {
 public:
  explicit Zsp(std::size_t index) : Node(EntityKind::zsp, index) {}
};

class Remote final : public Node {
 public:
  explicit Remote(std::size_t index) : Node(EntityKind::remote, index) {}
};

/// Dense, creation-ordered registry.
template <class T>
class Registry {
 public:
  T& create() {
    items_.push_back(std::make_unique<T>(items_.size()));
    return *items_.back();
  }
  T& get(std::size_t id) const {
    if (id >= items_.size()) {
      throw SimError(Errc::unknown_entity, "no entity with id " + std::to_string(id));
    }
    return *items_[id];
  }
  std::size_t size() const { return items_.size(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<std::unique_ptr<T>> items_;
};

}  // namespace iodsim
