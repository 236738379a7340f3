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
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "iodsim/geometry.hpp"

namespace iodsim {

/// Axis-aligned closed box. Always stored with min <= max per axis.
class Box3 {
 public:
  Box3() = default;
  /// Any two opposite corners; the result is normalized.
  Box3(const Vec3& p1, const Vec3& p2);

  /// From the [x1, x2, y1, y2, z1, z2] array used by scenario files.
  static Box3 from_array(const std::array<double, 6>& a);
  std::array<double, 6> to_array() const;

  const Vec3& min() const { return min_; }
  const Vec3& max() const { return max_; }

  /// Boundary counts as inside.
  bool contains(const Vec3& p) const;

  /// Parameter interval [t0, t1] of segment a + t(b - a), t in [0, 1], that
  /// lies in the box, or nullopt when the segment misses it.
  std::optional<std::pair<double, double>> clip_segment(const Vec3& a, const Vec3& b) const;

  friend bool operator==(const Box3&, const Box3&) = default;

 private:
  Vec3 min_;
  Vec3 max_;
};

enum class BuildingType { commercial, residential, office };
enum class WallMaterial { wood, concrete_with_windows, concrete_without_windows, stone_blocks };

std::string_view to_string(BuildingType t);
std::string_view to_string(WallMaterial m);
std::optional<BuildingType> parse_building_type(std::string_view s);
std::optional<WallMaterial> parse_wall_material(std::string_view s);

struct Building {
  Box3 bounds;
  BuildingType type = BuildingType::residential;
  WallMaterial walls = WallMaterial::concrete_with_windows;
  int floors = 1;
  int rooms_x = 1;
  int rooms_y = 1;
};

struct WallCrossing {
  std::size_t building = 0;
  WallMaterial material = WallMaterial::concrete_with_windows;
  int count = 0;  ///< 1 or 2

  friend bool operator==(const WallCrossing&, const WallCrossing&) = default;
};

/// Buildings and regions of interest of the simulated space.
class World {
 public:
  /// Throws MalformedBox when the bounds are not finite.
  std::size_t add_building(const Building& building);
  const std::vector<Building>& buildings() const { return buildings_; }

  std::size_t create_region(const Box3& bounds);
  std::size_t region_count() const { return regions_.size(); }
  const Box3& get_region_coordinates(std::size_t id) const;
  void set_region_coordinates(std::size_t id, const Box3& bounds);

  /// True iff `position` lies in every listed region; an empty list is true.
  bool is_in_regions(const Vec3& position, std::span<const std::size_t> ids) const;

  /// Building boundary crossings of segment ab, one entry per building hit.
  std::vector<WallCrossing> wall_crossings(const Vec3& a, const Vec3& b) const;

 private:
  std::vector<Building> buildings_;
  std::vector<Box3> regions_;
};

}  // namespace iodsim
