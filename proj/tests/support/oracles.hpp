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
// Reference implementations kept independent of the library code paths.
#pragma once

#include <cmath>
#include <vector>

#include "iodsim/geometry.hpp"
#include "iodsim/mobility.hpp"

namespace iodsim::test {

/// Control polygon with each interest point repeated `level` times.
inline std::vector<Vec3> expand_polygon(const std::vector<InterestPoint>& plan) {
  std::vector<Vec3> out;
  for (const auto& p : plan) {
    for (unsigned k = 0; k < p.level; ++k) out.push_back(p.position);
  }
  return out;
}

inline Vec3 de_casteljau(std::vector<Vec3> pts, double t) {
  for (std::size_t r = pts.size(); r-- > 1;) {
    for (std::size_t i = 0; i < r; ++i) pts[i] = pts[i] * (1.0 - t) + pts[i + 1] * t;
  }
  return pts.front();
}

/// Induced power from momentum theory, solved by bisection on
/// v_i^4 + v_i^2 w - V_h^4 = 0 with w = horizontal speed squared.
inline double induced_velocity(double vh, double w) {
  double lo = 0.0, hi = vh;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * mid * mid + mid * mid * w - vh * vh * vh * vh < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double hover_velocity(double mass, double area, double rho, double g = 9.81) {
  return std::sqrt(mass * g / (2.0 * rho * area));
}

}  // namespace iodsim::test
