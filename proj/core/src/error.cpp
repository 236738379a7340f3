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
#include "iodsim/error.hpp"

namespace iodsim {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::negative_delay: return "NegativeDelay";
    case Errc::engine_finished: return "EngineFinished";
    case Errc::reentrant_run: return "ReentrantRun";
    case Errc::malformed_box: return "MalformedBox";
    case Errc::unknown_region: return "UnknownRegion";
    case Errc::degenerate_plan: return "DegeneratePlan";
    case Errc::invalid_step: return "InvalidStep";
    case Errc::level_overflow: return "LevelOverflow";
    case Errc::non_positive_kinematics: return "NonPositiveKinematics";
    case Errc::negative_speed: return "NegativeSpeed";
    case Errc::non_positive_mass: return "NonPositiveMass";
    case Errc::invalid_mechanics: return "InvalidMechanics";
    case Errc::unknown_entity: return "UnknownEntity";
    case Errc::zero_distance: return "ZeroDistance";
    case Errc::frequency_out_of_range: return "FrequencyOutOfRange";
    case Errc::empty_table: return "EmptyTable";
    case Errc::link_down: return "LinkDown";
    case Errc::not_on_bus: return "NotOnBus";
    case Errc::port_exhaustion: return "PortExhaustion";
    case Errc::connection_lost: return "ConnectionLost";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::validation_error: return "ValidationError";
    case Errc::build_error: return "BuildError";
    case Errc::io_error: return "IoError";
    case Errc::missing_artifact: return "MissingArtifact";
  }
  return "Unknown";
}

}  // namespace iodsim
