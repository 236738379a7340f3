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

#include <cmath>

#include "iodsim/channel.hpp"
#include "iodsim/error.hpp"

namespace iodsim {
namespace {

TEST(Friis, FrozenValues) {
  FriisLoss f24(2.4e9);
  EXPECT_NEAR(f24.loss({0, 0, 0}, {1, 0, 0}), 40.05200805611549, 1e-9);
  FriisLoss f515(5.15e9);
  EXPECT_NEAR(f515.loss({0, 0, 0}, {0, 60, 80}), 86.68392780270719, 1e-9);
}

TEST(Friis, TwentyDbPerDecade) {
  FriisLoss f(2.4e9);
  for (double d = 1.0; d < 1e4; d *= 3.7) {
    EXPECT_NEAR(f.loss({0, 0, 0}, {10 * d, 0, 0}) - f.loss({0, 0, 0}, {d, 0, 0}), 20.0, 1e-9);
  }
}

TEST(Friis, Symmetric) {
  FriisLoss f(2.4e9);
  Vec3 a{1, 2, 3}, b{-7, 4, 30};
  EXPECT_DOUBLE_EQ(f.loss(a, b), f.loss(b, a));
}

TEST(PathLoss, ZeroDistanceThrows) {
  FriisLoss f(2.4e9);
  try {
    f.loss({1, 1, 1}, {1, 1, 1});
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), Errc::zero_distance);
  }
  EXPECT_THROW(LogDistanceLoss().loss({}, {}), SimError);
}

TEST(LogDistance, ReferenceAndSlope) {
  LogDistanceLoss l(3.0, 46.6777, 1.0);
  EXPECT_NEAR(l.loss({0, 0, 0}, {1, 0, 0}), 46.6777, 1e-12);
  EXPECT_NEAR(l.loss({0, 0, 0}, {100, 0, 0}), 46.6777 + 60.0, 1e-9);
}

TEST(OkumuraHata, FrozenValues) {
  EXPECT_NEAR(OkumuraHataLoss::hata(900e6, 30, 1.5, 1000), 126.40328648085746, 1e-9);
  EXPECT_NEAR(OkumuraHataLoss::hata(900e6, 30, 1.5, 2000), 137.00702466405272, 1e-9);
  OkumuraHataLoss m(900e6, 30.0, 1.5);
  EXPECT_NEAR(m.loss({0, 0, 30}, {1000, 0, 30}), 126.40328648085746, 1e-9);
}

TEST(OkumuraHata, HeightsFromGeometryWhenUnset) {
  OkumuraHataLoss m(900e6);
  const Vec3 bs{0, 0, 40}, ue{3000, 0, 2};
  EXPECT_NEAR(m.loss(bs, ue), OkumuraHataLoss::hata(900e6, 40, 2, distance(bs, ue)), 1e-12);
}

TEST(OkumuraHata, FrequencyRange) {
  EXPECT_THROW(OkumuraHataLoss(2.4e9), SimError);
  EXPECT_THROW(OkumuraHataLoss(100e6), SimError);
  EXPECT_NO_THROW(OkumuraHataLoss(150e6));
  EXPECT_NO_THROW(OkumuraHataLoss(1500e6));
}

TEST(HybridBuildings, AddsWallLossPerCrossing) {
  World w;
  Building b;
  b.bounds = Box3({10, -5, 0}, {20, 5, 30});
  b.walls = WallMaterial::concrete_without_windows;
  w.add_building(b);
  HybridBuildingsLoss h(std::make_unique<FriisLoss>(2.4e9), w);
  FriisLoss f(2.4e9);
  const Vec3 a{0, 0, 10}, through{30, 0, 10}, inside{15, 0, 10}, above{30, 0, 40};
  EXPECT_NEAR(h.loss(a, through) - f.loss(a, through), 30.0, 1e-9);
  EXPECT_NEAR(h.loss(a, inside) - f.loss(a, inside), 15.0, 1e-9);
  EXPECT_NEAR(h.loss({0, 0, 40}, above), f.loss({0, 0, 40}, above), 1e-12);
}

TEST(RateTable, SelectsHighestEligibleRow) {
  const auto t = default_rate_table();
  EXPECT_EQ(select_rate(5.99, t), 0.0);
  EXPECT_EQ(select_rate(6.0, t), 6e6);
  EXPECT_EQ(select_rate(25.0, t), 54e6);
  EXPECT_EQ(select_rate(1000.0, t), 150e6);
  EXPECT_THROW(select_rate(10.0, {}), SimError);
}

TEST(RateTable, MonotoneInSnr) {
  const auto t = default_rate_table();
  double prev = 0.0;
  for (double s = -20.0; s < 80.0; s += 0.25) {
    const double r = select_rate(s, t);
    EXPECT_GE(r, prev);
    prev = r;
  }
}

TEST(RxPower, LinkBudget) {
  RadioParams p;
  p.tx_power_dbm = 16;
  p.tx_gain_dbi = 2;
  p.rx_gain_dbi = 1;
  EXPECT_DOUBLE_EQ(rx_power(p, 80.0), -61.0);
  EXPECT_DOUBLE_EQ(snr(-61.0, -94.0), 33.0);
}

}  // namespace
}  // namespace iodsim
