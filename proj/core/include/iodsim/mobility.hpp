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

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "iodsim/geometry.hpp"

namespace iodsim {

/// A waypoint of a flight plan. `level` weights how closely the generated
/// trajectory approaches the point; level 0 forces the drone through it and
/// makes it hover for `rest_time` seconds.
struct InterestPoint {
  Vec3 position;
  unsigned level = 1;
  Seconds rest_time = 0.0;
};

struct CurvePoint {
  Vec3 position;
  double dist_from_prev = 0.0;
  double dist_from_start = 0.0;
};

/// Highest curve degree accepted before the binomial weights are
/// considered numerically unsafe.
inline constexpr unsigned kMaxCurveDegree = 1000;
inline constexpr double kDefaultCurveStep = 0.001;

/// Interest-level weighted Bezier generator over one plan segment.
///
/// Equivalent to the classical Bezier curve whose control polygon repeats
/// point i exactly level_i times, so the total degree is sum(levels) - 1.
/// Basis values are evaluated in log space so degrees up to
/// kMaxCurveDegree neither overflow nor underflow.
class TrajectoryGenerator {
 public:
  /// Throws DegeneratePlan (fewer than two points, level 0, non-finite
  /// point) or LevelOverflow (degree above kMaxCurveDegree).
  explicit TrajectoryGenerator(std::span<const InterestPoint> points);

  unsigned degree() const { return degree_; }

  Vec3 operator()(double t) const;

  /// All degree()+1 Bernstein basis values at t.
  std::vector<double> basis(double t) const;

  /// Total weight carried by each interest point at t.
  std::vector<double> point_weights(double t) const;

 private:
  std::vector<Vec3> points_;
  std::vector<unsigned> levels_;
  unsigned degree_ = 0;
  std::vector<double> log_binomial_;
};

/// Discretized trajectory with cumulative chord lengths.
class Curve {
 public:
  Curve() = default;
  Curve(std::vector<CurvePoint> samples, double step);

  const std::vector<CurvePoint>& samples() const { return samples_; }
  double step() const { return step_; }
  double length() const { return samples_.empty() ? 0.0 : samples_.back().dist_from_start; }
  const Vec3& start() const { return samples_.front().position; }
  const Vec3& end() const { return samples_.back().position; }

  struct Lookup {
    Vec3 position;
    Vec3 tangent;  ///< unit vector, zero for a degenerate curve
  };
  /// Linear interpolation between samples; clamps to [0, length()].
  Lookup at_distance(double s) const;

 private:
  std::vector<CurvePoint> samples_;
  double step_ = kDefaultCurveStep;
};

/// Samples the generator at t = 0, step, 2 step, ..., 1. Throws
/// InvalidStep unless 0 < step <= 1.
Curve generate_curve(std::span<const InterestPoint> plan, double step = kDefaultCurveStep);

/// One contiguous curve of a flight plan.
struct PlanLeg {
  std::vector<InterestPoint> points;  ///< all levels >= 1
  Seconds rest_before = 0.0;          ///< only non-zero on the first leg
  Seconds rest_after = 0.0;
};

/// Cuts the plan at every level-0 point. The point closes one leg and
/// opens the next, promoted to level 1 in both.
std::vector<PlanLeg> split_plan(std::span<const InterestPoint> plan);

struct MobilityState {
  Vec3 position;
  Vec3 velocity;
  double arc_length = 0.0;  ///< distance flown along the trajectory
  std::size_t segment = 0;  ///< index of the current leg
  std::optional<Seconds> resting_until;
};

/// Position along a single curve for the piecewise constant-acceleration
/// law: accelerate at `accel` until `max_speed`, then cruise.
MobilityState constant_accel_position(Seconds t, const Curve& curve, double accel,
                                      double max_speed);

/// Position along a single curve for speed v(t) = sum c_k t^k.
MobilityState parametric_speed_position(Seconds t, const Curve& curve,
                                        std::span<const double> coeffs);

/// Speed law applied from the start of every leg.
class SpeedProfile {
 public:
  virtual ~SpeedProfile() = default;
  virtual double distance(Seconds tau) const = 0;
  virtual double speed(Seconds tau) const = 0;
  /// Time needed to fly `length` metres; +inf when never reached.
  virtual Seconds time_to_cover(double length) const = 0;
};

class ConstantAccelerationProfile final : public SpeedProfile {
 public:
  /// Throws NonPositiveKinematics unless both values are positive.
  ConstantAccelerationProfile(double accel, double max_speed);
  double distance(Seconds tau) const override;
  double speed(Seconds tau) const override;
  Seconds time_to_cover(double length) const override;

 private:
  double accel_;
  double max_speed_;
};

class PolynomialSpeedProfile final : public SpeedProfile {
 public:
  /// Checks v >= 0 on a grid over [0, horizon]; throws NegativeSpeed.
  PolynomialSpeedProfile(std::vector<double> coeffs, Seconds horizon);
  double distance(Seconds tau) const override;
  double speed(Seconds tau) const override;
  Seconds time_to_cover(double length) const override;

 private:
  std::vector<double> coeffs_;
  Seconds horizon_;
};

/// Base of every mobility model. Positions are pure functions of time.
class MobilityModel {
 public:
  virtual ~MobilityModel() = default;
  virtual std::string_view name() const = 0;

  MobilityState state_at(Seconds t) const;

  /// Holds the model at its time-`t` position with zero velocity from then on.
  void freeze(Seconds t) { frozen_at_ = t; }
  std::optional<Seconds> frozen_at() const { return frozen_at_; }

 protected:
  virtual MobilityState do_state_at(Seconds t) const = 0;

 private:
  std::optional<Seconds> frozen_at_;
};

class ConstantPositionMobility final : public MobilityModel {
 public:
  explicit ConstantPositionMobility(const Vec3& position) : position_(position) {}
  std::string_view name() const override { return "constantPosition"; }

 protected:
  MobilityState do_state_at(Seconds) const override { return {position_, {}, 0.0, 0, {}}; }

 private:
  Vec3 position_;
};

/// Flies the legs of a split flight plan one after another, hovering for
/// the rest time between legs and restarting the speed law from rest.
class CurveMobility final : public MobilityModel {
 public:
  CurveMobility(std::string_view name, std::span<const InterestPoint> plan, double step,
                std::unique_ptr<SpeedProfile> profile);

  std::string_view name() const override { return name_; }
  const std::vector<Curve>& curves() const { return curves_; }
  double total_length() const;

 protected:
  MobilityState do_state_at(Seconds t) const override;

 private:
  std::string_view name_;
  std::vector<Curve> curves_;
  std::vector<Seconds> leg_start_;
  std::vector<Seconds> leg_flight_;
  std::vector<Seconds> rest_after_;
  std::unique_ptr<SpeedProfile> profile_;
};

std::unique_ptr<MobilityModel> make_constant_acceleration_mobility(
    std::span<const InterestPoint> plan, double accel, double max_speed,
    double step = kDefaultCurveStep);

std::unique_ptr<MobilityModel> make_parametric_speed_mobility(std::span<const InterestPoint> plan,
                                                              std::vector<double> coeffs,
                                                              Seconds horizon,
                                                              double step = kDefaultCurveStep);

}  // namespace iodsim
