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
#include "iodsim/peripherals.hpp"

#include <cmath>

#include "iodsim/error.hpp"

namespace iodsim {

std::string_view to_string(PeripheralState s) {
  switch (s) {
    case PeripheralState::off:
      return "OFF";
    case PeripheralState::idle:
      return "IDLE";
    case PeripheralState::on:
      return "ON";
  }
  return "?";
}

Peripheral::Peripheral(std::string kind, const std::array<double, 3>& power_by_state)
    : kind_(std::move(kind)), power_(power_by_state) {
  for (double p : power_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw SimError(Errc::validation_error, "peripheral power must be finite and >= 0");
    }
  }
  if (power_[0] != 0.0) {
    throw SimError(Errc::validation_error, "peripheral power in OFF state must be 0");
  }
}

PeripheralState Peripheral::set_state(PeripheralState next) {
  const auto prev = state_;
  if (!disabled_) state_ = next;
  return prev;
}

void Peripheral::update_roi(bool inside) {
  if (disabled_ || roi_trigger_.empty()) return;
  if (last_inside_ && *last_inside_ == inside) return;
  last_inside_ = inside;
  state_ = inside ? PeripheralState::on : PeripheralState::idle;
}

void Peripheral::force_off() {
  state_ = PeripheralState::off;
  disabled_ = true;
}

StoragePeripheral::StoragePeripheral(const std::array<double, 3>& power_by_state,
                                     std::uint64_t capacity_bits,
                                     std::optional<std::uint64_t> initial_remaining)
    : Peripheral("storage", power_by_state),
      capacity_(capacity_bits),
      remaining_(initial_remaining.value_or(capacity_bits)) {
  if (remaining_ > capacity_) {
    throw SimError(Errc::validation_error, "InitialRemainingCapacity exceeds Capacity");
  }
}

bool StoragePeripheral::alloc(std::uint64_t bits) {
  if (bits > remaining_) return false;
  remaining_ -= bits;
  notify();
  return true;
}

bool StoragePeripheral::free(std::uint64_t bits) {
  if (bits > capacity_ - remaining_) return false;
  remaining_ += bits;
  notify();
  return true;
}

void StoragePeripheral::notify() {
  for (auto& cb : observers_) cb();
}

InputPeripheral::InputPeripheral(const std::array<double, 3>& power_by_state, double data_rate_bps,
                                 Seconds interval, bool has_storage)
    : Peripheral("input", power_by_state),
      data_rate_(data_rate_bps),
      interval_(interval),
      has_storage_(has_storage) {
  if (!std::isfinite(data_rate_bps) || data_rate_bps < 0.0) {
    throw SimError(Errc::validation_error, "DataRate must be >= 0");
  }
  if (!std::isfinite(interval) || interval <= 0.0) {
    throw SimError(Errc::validation_error, "DataAcquisitionTimeInterval must be > 0");
  }
}

std::uint64_t InputPeripheral::acquire_tick() {
  if (state() != PeripheralState::on) return 0;
  const auto bits = static_cast<std::uint64_t>(std::llround(data_rate_ * interval_));
  if (has_storage_ && storage_ != nullptr && !storage_->alloc(bits)) {
    ++dropped_;
    return 0;
  }
  acquired_ += bits;
  return bits;
}

}  // namespace iodsim
