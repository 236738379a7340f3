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
#include "iodsim/world.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iodsim/error.hpp"

namespace iodsim {

namespace {

// Segments that only graze a box (face, edge or corner contact) do not
// count as wall crossings.
constexpr double kGrazeLength = 1e-9;

void require_finite(const Box3& b) {
  if (!b.min().finite() || !b.max().finite()) {
    throw SimError(Errc::malformed_box, "box coordinates must be finite");
  }
}

}  // namespace

Box3::Box3(const Vec3& p1, const Vec3& p2)
    : min_{std::min(p1.x, p2.x), std::min(p1.y, p2.y), std::min(p1.z, p2.z)},
      max_{std::max(p1.x, p2.x), std::max(p1.y, p2.y), std::max(p1.z, p2.z)} {}

Box3 Box3::from_array(const std::array<double, 6>& a) {
  return Box3({a[0], a[2], a[4]}, {a[1], a[3], a[5]});
}

std::array<double, 6> Box3::to_array() const {
  return {min_.x, max_.x, min_.y, max_.y, min_.z, max_.z};
}

bool Box3::contains(const Vec3& p) const {
  return p.x >= min_.x && p.x <= max_.x && p.y >= min_.y && p.y <= max_.y && p.z >= min_.z &&
         p.z <= max_.z;
}

std::optional<std::pair<double, double>> Box3::clip_segment(const Vec3& a, const Vec3& b) const {
  const std::array<double, 3> origin{a.x, a.y, a.z};
  const std::array<double, 3> dir{b.x - a.x, b.y - a.y, b.z - a.z};
  const std::array<double, 3> lo{min_.x, min_.y, min_.z};
  const std::array<double, 3> hi{max_.x, max_.y, max_.z};

  double t0 = 0.0;
  double t1 = 1.0;
  for (int axis = 0; axis < 3; ++axis) {
    if (dir[axis] == 0.0) {
      if (origin[axis] < lo[axis] || origin[axis] > hi[axis]) return std::nullopt;
      continue;
    }
    double ta = (lo[axis] - origin[axis]) / dir[axis];
    double tb = (hi[axis] - origin[axis]) / dir[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

std::string_view to_string(BuildingType t) {
  switch (t) {
    case BuildingType::commercial: return "commercial";
    case BuildingType::residential: return "residential";
    case BuildingType::office: return "office";
  }
  return "residential";
}

std::string_view to_string(WallMaterial m) {
  switch (m) {
    case WallMaterial::wood: return "wood";
    case WallMaterial::concrete_with_windows: return "concreteWithWindows";
    case WallMaterial::concrete_without_windows: return "concreteWithoutWindows";
    case WallMaterial::stone_blocks: return "stoneBlocks";
  }
  return "concreteWithWindows";
}

std::optional<BuildingType> parse_building_type(std::string_view s) {
  for (auto t : {BuildingType::commercial, BuildingType::residential, BuildingType::office}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<WallMaterial> parse_wall_material(std::string_view s) {
  for (auto m : {WallMaterial::wood, WallMaterial::concrete_with_windows,
                 WallMaterial::concrete_without_windows, WallMaterial::stone_blocks}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::size_t World::add_building(const Building& building) {
  require_finite(building.bounds);
  buildings_.push_back(building);
  return buildings_.size() - 1;
}

std::size_t World::create_region(const Box3& bounds) {
  require_finite(bounds);
  regions_.push_back(bounds);
  return regions_.size() - 1;
}

const Box3& World::get_region_coordinates(std::size_t id) const {
  if (id >= regions_.size()) {
    throw SimError(Errc::unknown_region, "region " + std::to_string(id) + " of " +
                                             std::to_string(regions_.size()));
  }
  return regions_[id];
}

void World::set_region_coordinates(std::size_t id, const Box3& bounds) {
  require_finite(bounds);
  if (id >= regions_.size()) {
    throw SimError(Errc::unknown_region, "region " + std::to_string(id) + " of " +
                                             std::to_string(regions_.size()));
  }
  regions_[id] = bounds;
}

bool World::is_in_regions(const Vec3& position, std::span<const std::size_t> ids) const {
  bool inside = true;
  for (auto id : ids) {
    // Every id is validated even after the answer is known.
    inside = get_region_coordinates(id).contains(position) && inside;
  }
  return inside;
}

std::vector<WallCrossing> World::wall_crossings(const Vec3& a, const Vec3& b) const {
  std::vector<WallCrossing> out;
  const double length = distance(a, b);
  for (std::size_t i = 0; i < buildings_.size(); ++i) {
    const Box3& box = buildings_[i].bounds;
    const auto clip = box.clip_segment(a, b);
    if (!clip || (clip->second - clip->first) * length < kGrazeLength) continue;
    const int count = (box.contains(a) ? 0 : 1) + (box.contains(b) ? 0 : 1);
    if (count > 0) out.push_back(WallCrossing{i, buildings_[i].walls, count});
  }
  return out;
}

}  // namespace iodsim
