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

#include <random>

#include "iodsim/error.hpp"
#include "iodsim/world.hpp"

namespace iodsim {
namespace {

TEST(Box3, NormalizesCorners) {
  Box3 b({10, 0, 5}, {0, 10, 0});
  EXPECT_EQ(b.min(), (Vec3{0, 0, 0}));
  EXPECT_EQ(b.max(), (Vec3{10, 10, 5}));
  EXPECT_EQ(Box3::from_array({10, 0, 10, 0, 5, 0}), b);
  EXPECT_EQ(b.to_array(), (std::array<double, 6>{0, 10, 0, 10, 0, 5}));
}

TEST(Box3, BoundaryIsInside) {
  Box3 b({0, 0, 0}, {1, 1, 1});
  EXPECT_TRUE(b.contains({1, 1, 1}));
  EXPECT_TRUE(b.contains({0, 0.5, 0}));
  EXPECT_FALSE(b.contains({1.0000001, 0.5, 0.5}));
}

TEST(Box3, ClipSegment) {
  Box3 b({0, 0, 0}, {10, 10, 10});
  auto c = b.clip_segment({-10, 5, 5}, {20, 5, 5});
  ASSERT_TRUE(c);
  EXPECT_NEAR(c->first, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(c->second, 2.0 / 3.0, 1e-12);
  EXPECT_FALSE(b.clip_segment({-10, 20, 5}, {20, 20, 5}));
}

TEST(Box3, ClipAgreesWithSampling) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20, 20);
  Box3 b({-5, -3, 0}, {6, 4, 8});
  for (int i = 0; i < 500; ++i) {
    Vec3 a{u(rng), u(rng), u(rng)}, c{u(rng), u(rng), u(rng)};
    auto clip = b.clip_segment(a, c);
    for (int k = 0; k <= 200; ++k) {
      const double t = k / 200.0;
      const bool inside = b.contains(a + (c - a) * t);
      const bool in_clip = clip && t >= clip->first - 1e-9 && t <= clip->second + 1e-9;
      if (inside) EXPECT_TRUE(in_clip) << i << " " << t;
      if (clip && t > clip->first + 1e-6 && t < clip->second - 1e-6) EXPECT_TRUE(inside);
    }
  }
}

TEST(World, RegionMembershipIsConjunction) {
  World w;
  auto r0 = w.create_region(Box3({0, 0, 0}, {10, 10, 10}));
  auto r1 = w.create_region(Box3({5, 5, 0}, {20, 20, 10}));
  std::vector<std::size_t> both{r0, r1};
  std::vector<std::size_t> none;
  EXPECT_TRUE(w.is_in_regions({7, 7, 1}, both));
  EXPECT_FALSE(w.is_in_regions({2, 2, 1}, both));
  EXPECT_TRUE(w.is_in_regions({100, 100, 100}, none));
  std::vector<std::size_t> bad{7};
  EXPECT_THROW(w.is_in_regions({0, 0, 0}, bad), SimError);
}

TEST(World, RegionCoordinatesRoundTrip) {
  World w;
  auto r = w.create_region(Box3({0, 0, 0}, {1, 1, 1}));
  w.set_region_coordinates(r, Box3({2, 2, 2}, {3, 3, 3}));
  EXPECT_EQ(w.get_region_coordinates(r), Box3({2, 2, 2}, {3, 3, 3}));
  EXPECT_EQ(w.region_count(), 1u);
}

TEST(World, WallCrossings) {
  World w;
  Building b;
  b.bounds = Box3({10, -5, 0}, {20, 5, 30});
  b.walls = WallMaterial::stone_blocks;
  w.add_building(b);
  auto through = w.wall_crossings({0, 0, 10}, {30, 0, 10});
  ASSERT_EQ(through.size(), 1u);
  EXPECT_EQ(through[0], (WallCrossing{0, WallMaterial::stone_blocks, 2}));
  auto into = w.wall_crossings({0, 0, 10}, {15, 0, 10});
  ASSERT_EQ(into.size(), 1u);
  EXPECT_EQ(into[0].count, 1);
  EXPECT_TRUE(w.wall_crossings({0, 0, 40}, {30, 0, 40}).empty());
  EXPECT_TRUE(w.wall_crossings({12, 0, 1}, {18, 0, 1}).empty());
}

TEST(World, RejectsNonFiniteBuilding) {
  World w;
  Building b;
  b.bounds = Box3({0, 0, 0}, {std::numeric_limits<double>::infinity(), 1, 1});
  EXPECT_THROW(w.add_building(b), SimError);
}

TEST(World, EnumNames) {
  EXPECT_EQ(parse_wall_material("concreteWithWindows"), WallMaterial::concrete_with_windows);
  EXPECT_EQ(parse_building_type("office"), BuildingType::office);
  EXPECT_FALSE(parse_wall_material("glass"));
  for (auto m : {WallMaterial::wood, WallMaterial::concrete_with_windows,
                 WallMaterial::concrete_without_windows, WallMaterial::stone_blocks}) {
    EXPECT_EQ(parse_wall_material(to_string(m)), m);
  }
}

}  // namespace
}  // namespace iodsim
