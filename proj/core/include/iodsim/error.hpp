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

#include <stdexcept>
#include <string>
#include <string_view>

namespace iodsim {

/// Failure categories raised by the simulator. Each value names one
/// contract violation so that callers (and tests) can branch on it.
enum class Errc {
  // engine
  negative_delay,
  engine_finished,
  reentrant_run,
  // world
  malformed_box,
  unknown_region,
  // mobility
  degenerate_plan,
  invalid_step,
  level_overflow,
  non_positive_kinematics,
  negative_speed,
  // entities
  non_positive_mass,
  invalid_mechanics,
  unknown_entity,
  // channel
  zero_distance,
  frequency_out_of_range,
  empty_table,
  link_down,
  not_on_bus,
  // apps
  port_exhaustion,
  connection_lost,
  // config / report / cli
  syntax_error,
  validation_error,
  build_error,
  io_error,
  missing_artifact,
};

std::string_view to_string(Errc code) noexcept;

class SimError : public std::runtime_error {
 public:
  SimError(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace iodsim
