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
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iodsim/geometry.hpp"

namespace iodsim {

/// Scenario files list power draws in this order: [OFF, IDLE, ON].
enum class PeripheralState { off = 0, idle = 1, on = 2 };

std::string_view to_string(PeripheralState s);

/// Generic on-board device with a three-state power FSM.
class Peripheral {
 public:
  /// Throws ValidationError when a draw is negative or OFF is not 0 W.
  Peripheral(std::string kind, const std::array<double, 3>& power_by_state);
  virtual ~Peripheral() = default;

  const std::string& kind() const { return kind_; }

  /// Returns the previous state. Ignored once the peripheral was forced off.
  PeripheralState set_state(PeripheralState next);
  PeripheralState state() const { return state_; }

  double power() const { return power_in(state_); }
  double power_in(PeripheralState s) const { return power_[static_cast<int>(s)]; }
  const std::array<double, 3>& power_by_state() const { return power_; }

  void set_roi_trigger(std::vector<std::size_t> regions) { roi_trigger_ = std::move(regions); }
  const std::vector<std::size_t>& roi_trigger() const { return roi_trigger_; }

  /// Applies RoI gating for the latest containment result. The state only
  /// changes when `inside` differs from the previous evaluation, so a manual
  /// set_state holds until the next boundary crossing.
  void update_roi(bool inside);

  /// Permanent OFF, used on energy depletion.
  void force_off();
  bool disabled() const { return disabled_; }

 private:
  std::string kind_;
  std::array<double, 3> power_;
  PeripheralState state_ = PeripheralState::on;
  std::vector<std::size_t> roi_trigger_;
  std::optional<bool> last_inside_;
  bool disabled_ = false;
};

/// Disk with bit-level alloc/free accounting. Both operations are
/// all-or-nothing.
class StoragePeripheral final : public Peripheral {
 public:
  StoragePeripheral(const std::array<double, 3>& power_by_state, std::uint64_t capacity_bits,
                    std::optional<std::uint64_t> initial_remaining = std::nullopt);

  bool alloc(std::uint64_t bits);
  bool free(std::uint64_t bits);

  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t remaining() const { return remaining_; }
  std::uint64_t occupied() const { return capacity_ - remaining_; }

  /// Invoked after every successful alloc or free.
  void on_change(std::function<void()> cb) { observers_.push_back(std::move(cb)); }

 private:
  void notify();

  std::uint64_t capacity_;
  std::uint64_t remaining_;
  std::vector<std::function<void()>> observers_;
};

/// Sensor that produces DataRate * DataAcquisitionTimeInterval bits per
/// acquisition while ON.
class InputPeripheral final : public Peripheral {
 public:
  InputPeripheral(const std::array<double, 3>& power_by_state, double data_rate_bps,
                  Seconds interval, bool has_storage);

  double data_rate() const { return data_rate_; }
  Seconds interval() const { return interval_; }
  bool has_storage() const { return has_storage_; }
  void attach_storage(StoragePeripheral* storage) { storage_ = storage; }

  /// Bits acquired by this tick; 0 when not ON or when the storage
  /// rejected the sample.
  std::uint64_t acquire_tick();

  std::uint64_t acquired_bits() const { return acquired_; }
  std::uint64_t dropped_samples() const { return dropped_; }

 private:
  double data_rate_;
  Seconds interval_;
  bool has_storage_;
  StoragePeripheral* storage_ = nullptr;
  std::uint64_t acquired_ = 0;
  std::uint64_t dropped_ = 0;
};

}  // namespace iodsim
