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

#include "iodsim/entities.hpp"
#include "iodsim/error.hpp"
#include "iodsim/peripherals.hpp"

namespace iodsim {
namespace {

TEST(Peripheral, PowerFollowsState) {
  Peripheral p("generic", {0.0, 2.0, 12.0});
  EXPECT_EQ(p.state(), PeripheralState::on);
  EXPECT_DOUBLE_EQ(p.power(), 12.0);
  EXPECT_EQ(p.set_state(PeripheralState::idle), PeripheralState::on);
  EXPECT_DOUBLE_EQ(p.power(), 2.0);
}

TEST(Peripheral, RejectsBadPowerTables) {
  EXPECT_THROW(Peripheral("g", {1.0, 2.0, 3.0}), SimError);
  EXPECT_THROW(Peripheral("g", {0.0, -2.0, 3.0}), SimError);
}

TEST(Peripheral, RoiGatingOnlyActsOnCrossings) {
  Peripheral p("generic", {0.0, 1.0, 5.0});
  p.update_roi(false);  // no trigger configured
  EXPECT_EQ(p.state(), PeripheralState::on);

  p.set_roi_trigger({0});
  p.update_roi(false);
  EXPECT_EQ(p.state(), PeripheralState::idle);
  p.set_state(PeripheralState::on);  // manual override
  p.update_roi(false);
  EXPECT_EQ(p.state(), PeripheralState::on);
  p.update_roi(true);
  EXPECT_EQ(p.state(), PeripheralState::on);
  p.update_roi(false);
  EXPECT_EQ(p.state(), PeripheralState::idle);
}

TEST(Peripheral, ForceOffIsPermanent) {
  Peripheral p("generic", {0.0, 1.0, 5.0});
  p.set_roi_trigger({0});
  p.force_off();
  p.set_state(PeripheralState::on);
  p.update_roi(true);
  EXPECT_EQ(p.state(), PeripheralState::off);
  EXPECT_EQ(p.power(), 0.0);
  EXPECT_TRUE(p.disabled());
}

TEST(Storage, AllocFreeConservation) {
  StoragePeripheral s({0, 0, 0}, 1000);
  int changes = 0;
  s.on_change([&] { ++changes; });
  EXPECT_TRUE(s.alloc(600));
  EXPECT_FALSE(s.alloc(401));
  EXPECT_TRUE(s.alloc(400));
  EXPECT_EQ(s.remaining(), 0u);
  EXPECT_FALSE(s.free(1001));
  EXPECT_TRUE(s.free(250));
  EXPECT_EQ(s.occupied(), 750u);
  EXPECT_EQ(changes, 3);
  EXPECT_EQ(s.occupied() + s.remaining(), s.capacity());
}

TEST(Storage, InitialRemaining) {
  StoragePeripheral s({0, 0, 0}, 1000, 100);
  EXPECT_EQ(s.occupied(), 900u);
  EXPECT_THROW(StoragePeripheral({0, 0, 0}, 10, 11), SimError);
}

TEST(Input, AcquisitionDropsWholeSampleWhenFull) {
  StoragePeripheral s({0, 0, 0}, 2500);
  InputPeripheral in({0, 0, 1}, 1000.0, 1.0, true);
  in.attach_storage(&s);
  EXPECT_EQ(in.acquire_tick(), 1000u);
  EXPECT_EQ(in.acquire_tick(), 1000u);
  EXPECT_EQ(in.acquire_tick(), 0u);
  EXPECT_EQ(in.dropped_samples(), 1u);
  EXPECT_EQ(s.occupied(), 2000u);
  EXPECT_EQ(in.acquired_bits(), 2000u);
}

TEST(Input, NothingAcquiredUnlessOn) {
  InputPeripheral in({0, 0, 1}, 1000.0, 0.5, false);
  in.set_state(PeripheralState::idle);
  EXPECT_EQ(in.acquire_tick(), 0u);
  in.set_state(PeripheralState::on);
  EXPECT_EQ(in.acquire_tick(), 500u);
  EXPECT_EQ(in.dropped_samples(), 0u);
  EXPECT_THROW(InputPeripheral({0, 0, 1}, -1.0, 1.0, false), SimError);
  EXPECT_THROW(InputPeripheral({0, 0, 1}, 1.0, 0.0, false), SimError);
}

TEST(Drone, OneStorageOnly) {
  Drone d(0);
  d.add_peripheral(std::make_unique<StoragePeripheral>(std::array<double, 3>{0, 0, 0}, 10));
  EXPECT_THROW(
      d.add_peripheral(std::make_unique<StoragePeripheral>(std::array<double, 3>{0, 0, 0}, 10)),
      SimError);
  EXPECT_NE(d.storage(), nullptr);
}

TEST(Registry, UnknownIdThrows) {
  Registry<Zsp> r;
  r.create();
  EXPECT_EQ(r.get(0).index(), 0u);
  try {
    r.get(1);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), Errc::unknown_entity);
  }
}

}  // namespace
}  // namespace iodsim
