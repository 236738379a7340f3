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
#include "iodsim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iodsim/error.hpp"

namespace iodsim {

namespace {

constexpr double kNegativeSpeedTolerance = 1e-9;

void require_finite_points(std::span<const InterestPoint> plan) {
  for (const auto& p : plan) {
    if (!p.position.finite()) {
      throw SimError(Errc::degenerate_plan, "interest point position is not finite");
    }
    if (!std::isfinite(p.rest_time) || p.rest_time < 0.0) {
      throw SimError(Errc::degenerate_plan, "rest time must be finite and non-negative");
    }
  }
}

double poly(std::span<const double> c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Antiderivative of the polynomial, zero at x = 0.
double poly_integral(std::span<const double> c, double x) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k] / static_cast<double>(k + 1);
  return acc * x;
}

void check_speed_grid(std::span<const double> coeffs, double horizon) {
  constexpr int kGrid = 10000;
  for (int i = 0; i <= kGrid; ++i) {
    const double tau = horizon * i / kGrid;
    if (poly(coeffs, tau) < -kNegativeSpeedTolerance) {
      throw SimError(Errc::negative_speed, "speed polynomial is negative at t=" +
                                               std::to_string(tau));
    }
  }
}

MobilityState along_curve(const Curve& curve, double s, double speed) {
  MobilityState st;
  const double length = curve.length();
  if (s >= length) {
    st.position = curve.end();
    st.arc_length = length;
    return st;
  }
  const auto at = curve.at_distance(s);
  st.position = at.position;
  st.velocity = at.tangent * speed;
  st.arc_length = s;
  return st;
}

}  // namespace

// ---- generator -------------------------------------------------------------

TrajectoryGenerator::TrajectoryGenerator(std::span<const InterestPoint> points) {
  if (points.size() < 2) {
    throw SimError(Errc::degenerate_plan, "a curve needs at least two interest points");
  }
  require_finite_points(points);
  unsigned long total = 0;
  for (const auto& p : points) {
    if (p.level == 0) {
      throw SimError(Errc::degenerate_plan, "level-0 points must be split out before generation");
    }
    total += p.level;
    points_.push_back(p.position);
    levels_.push_back(p.level);
  }
  if (total - 1 > kMaxCurveDegree) {
    throw SimError(Errc::level_overflow,
                   "curve degree " + std::to_string(total - 1) + " exceeds " +
                       std::to_string(kMaxCurveDegree));
  }
  degree_ = static_cast<unsigned>(total - 1);

  std::vector<double> log_fact(degree_ + 1, 0.0);
  for (unsigned i = 2; i <= degree_; ++i) log_fact[i] = log_fact[i - 1] + std::log(double(i));
  log_binomial_.resize(degree_ + 1);
  for (unsigned k = 0; k <= degree_; ++k) {
    log_binomial_[k] = log_fact[degree_] - log_fact[k] - log_fact[degree_ - k];
  }
}

std::vector<double> TrajectoryGenerator::basis(double t) const {
  std::vector<double> b(degree_ + 1, 0.0);
  if (t <= 0.0) {
    b.front() = 1.0;
    return b;
  }
  if (t >= 1.0) {
    b.back() = 1.0;
    return b;
  }
  const double lt = std::log(t);
  const double l1t = std::log1p(-t);
  for (unsigned k = 0; k <= degree_; ++k) {
    b[k] = std::exp(log_binomial_[k] + k * lt + (degree_ - k) * l1t);
  }
  return b;
}

std::vector<double> TrajectoryGenerator::point_weights(double t) const {
  const auto b = basis(t);
  std::vector<double> w(points_.size(), 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (unsigned j = 0; j < levels_[i]; ++j) w[i] += b[k++];
  }
  return w;
}

Vec3 TrajectoryGenerator::operator()(double t) const {
  if (t <= 0.0) return points_.front();
  if (t >= 1.0) return points_.back();
  const auto w = point_weights(t);
  Vec3 g;
  for (std::size_t i = 0; i < points_.size(); ++i) g += points_[i] * w[i];
  return g;
}

// ---- curve -----------------------------------------------------------------

Curve::Curve(std::vector<CurvePoint> samples, double step)
    : samples_(std::move(samples)), step_(step) {}

Curve::Lookup Curve::at_distance(double s) const {
  if (samples_.size() < 2) return {samples_.empty() ? Vec3{} : samples_.front().position, {}};
  s = std::clamp(s, 0.0, length());

  // First sample strictly beyond s; the containing piece ends there.
  auto it = std::upper_bound(samples_.begin(), samples_.end(), s,
                             [](double v, const CurvePoint& p) { return v < p.dist_from_start; });
  std::size_t hi = it == samples_.end() ? samples_.size() - 1
                                        : static_cast<std::size_t>(it - samples_.begin());
  if (hi == 0) hi = 1;
  // Skip zero-length pieces so the tangent is defined.
  while (hi + 1 < samples_.size() && samples_[hi].dist_from_prev <= 0.0) ++hi;
  std::size_t lo = hi - 1;
  const auto& a = samples_[lo];
  const auto& b = samples_[hi];

  Lookup out;
  if (b.dist_from_prev <= 0.0) {
    out.position = a.position;
    return out;
  }
  const double f = std::clamp((s - a.dist_from_start) / b.dist_from_prev, 0.0, 1.0);
  const Vec3 d = b.position - a.position;
  out.position = a.position + d * f;
  out.tangent = d * (1.0 / b.dist_from_prev);
  return out;
}

Curve generate_curve(std::span<const InterestPoint> plan, double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw SimError(Errc::invalid_step, "curve step must lie in (0, 1]");
  }
  const TrajectoryGenerator gen(plan);
  const auto n = static_cast<std::size_t>(std::floor(1.0 / step + 1e-9));
  std::vector<CurvePoint> samples;
  samples.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = std::min(1.0, static_cast<double>(k) * step);
    samples.push_back({gen(t), 0.0, 0.0});
  }
  if (static_cast<double>(n) * step < 1.0 - 1e-12) samples.push_back({gen(1.0), 0.0, 0.0});
  for (std::size_t k = 1; k < samples.size(); ++k) {
    samples[k].dist_from_prev = distance(samples[k - 1].position, samples[k].position);
    samples[k].dist_from_start = samples[k - 1].dist_from_start + samples[k].dist_from_prev;
  }
  return Curve(std::move(samples), step);
}

// ---- plan splitting ----------------------------------------------------------

std::vector<PlanLeg> split_plan(std::span<const InterestPoint> plan) {
  if (plan.size() < 2) {
    throw SimError(Errc::degenerate_plan, "a flight plan needs at least two interest points");
  }
  require_finite_points(plan);

  auto promoted = [](InterestPoint p) {
    p.level = std::max(p.level, 1u);
    p.rest_time = 0.0;
    return p;
  };

  std::vector<PlanLeg> legs;
  PlanLeg leg;
  leg.points.push_back(promoted(plan.front()));
  if (plan.front().level == 0) leg.rest_before = plan.front().rest_time;

  for (std::size_t i = 1; i < plan.size(); ++i) {
    const auto& p = plan[i];
    leg.points.push_back(promoted(p));
    if (p.level == 0) {
      leg.rest_after = p.rest_time;
      if (leg.points.size() < 2) throw SimError(Errc::degenerate_plan, "empty plan segment");
      legs.push_back(std::move(leg));
      leg = PlanLeg{};
      if (i + 1 < plan.size()) leg.points.push_back(promoted(p));
    }
  }
  if (!leg.points.empty()) {
    if (leg.points.size() < 2) {
      throw SimError(Errc::degenerate_plan, "plan segment with fewer than two points");
    }
    legs.push_back(std::move(leg));
  }
  return legs;
}

// ---- single-curve laws -------------------------------------------------------

MobilityState constant_accel_position(Seconds t, const Curve& curve, double accel,
                                      double max_speed) {
  const ConstantAccelerationProfile profile(accel, max_speed);
  const double tau = std::max(0.0, t);
  return along_curve(curve, profile.distance(tau), profile.speed(tau));
}

MobilityState parametric_speed_position(Seconds t, const Curve& curve,
                                        std::span<const double> coeffs) {
  const double tau = std::max(0.0, t);
  check_speed_grid(coeffs, tau);
  return along_curve(curve, poly_integral(coeffs, tau), poly(coeffs, tau));
}

// ---- speed profiles ------------------------------------------------------------

ConstantAccelerationProfile::ConstantAccelerationProfile(double accel, double max_speed)
    : accel_(accel), max_speed_(max_speed) {
  if (!(accel > 0.0) || !(max_speed > 0.0) || !std::isfinite(accel) ||
      !std::isfinite(max_speed)) {
    throw SimError(Errc::non_positive_kinematics,
                   "acceleration and maximum speed must be positive");
  }
}

double ConstantAccelerationProfile::distance(Seconds tau) const {
  const double t_cap = max_speed_ / accel_;
  if (tau <= t_cap) return 0.5 * accel_ * tau * tau;
  return max_speed_ * max_speed_ / (2.0 * accel_) + max_speed_ * (tau - t_cap);
}

double ConstantAccelerationProfile::speed(Seconds tau) const {
  return std::min(accel_ * tau, max_speed_);
}

Seconds ConstantAccelerationProfile::time_to_cover(double length) const {
  if (length <= 0.0) return 0.0;
  const double ramp = max_speed_ * max_speed_ / (2.0 * accel_);
  if (length <= ramp) return std::sqrt(2.0 * length / accel_);
  return max_speed_ / accel_ + (length - ramp) / max_speed_;
}

PolynomialSpeedProfile::PolynomialSpeedProfile(std::vector<double> coeffs, Seconds horizon)
    : coeffs_(std::move(coeffs)), horizon_(horizon) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw SimError(Errc::negative_speed, "speed coefficient not finite");
  }
  check_speed_grid(coeffs_, horizon_);
}

double PolynomialSpeedProfile::distance(Seconds tau) const { return poly_integral(coeffs_, tau); }

double PolynomialSpeedProfile::speed(Seconds tau) const { return poly(coeffs_, tau); }

Seconds PolynomialSpeedProfile::time_to_cover(double length) const {
  if (length <= 0.0) return 0.0;
  if (distance(horizon_) < length) return std::numeric_limits<double>::infinity();
  // The antiderivative is non-decreasing on [0, horizon] since v >= 0 there.
  double lo = 0.0;
  double hi = horizon_;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (distance(mid) < length ? lo : hi) = mid;
  }
  return hi;
}

// ---- models ----------------------------------------------------------------------

MobilityState MobilityModel::state_at(Seconds t) const {
  if (frozen_at_ && t >= *frozen_at_) {
    auto st = do_state_at(*frozen_at_);
    st.velocity = {};
    st.resting_until.reset();
    return st;
  }
  return do_state_at(t);
}

CurveMobility::CurveMobility(std::string_view name, std::span<const InterestPoint> plan,
                             double step, std::unique_ptr<SpeedProfile> profile)
    : name_(name), profile_(std::move(profile)) {
  const auto legs = split_plan(plan);
  Seconds start = legs.front().rest_before;
  for (const auto& leg : legs) {
    curves_.push_back(generate_curve(leg.points, step));
    const Seconds flight = profile_->time_to_cover(curves_.back().length());
    leg_start_.push_back(start);
    leg_flight_.push_back(flight);
    rest_after_.push_back(leg.rest_after);
    start += flight + leg.rest_after;
  }
}

double CurveMobility::total_length() const {
  double sum = 0.0;
  for (const auto& c : curves_) sum += c.length();
  return sum;
}

MobilityState CurveMobility::do_state_at(Seconds t) const {
  if (t < leg_start_.front()) {
    MobilityState st;
    st.position = curves_.front().start();
    st.resting_until = leg_start_.front();
    return st;
  }
  std::size_t k = curves_.size() - 1;
  for (std::size_t i = 1; i < curves_.size(); ++i) {
    if (t < leg_start_[i]) {
      k = i - 1;
      break;
    }
  }
  double before = 0.0;
  for (std::size_t i = 0; i < k; ++i) before += curves_[i].length();

  const Seconds tau = t - leg_start_[k];
  MobilityState st;
  if (tau < leg_flight_[k]) {
    st = along_curve(curves_[k], profile_->distance(tau), profile_->speed(tau));
  } else {
    st.position = curves_[k].end();
    st.arc_length = curves_[k].length();
    if (k + 1 < curves_.size()) st.resting_until = leg_start_[k + 1];
  }
  st.arc_length += before;
  st.segment = k;
  return st;
}

std::unique_ptr<MobilityModel> make_constant_acceleration_mobility(
    std::span<const InterestPoint> plan, double accel, double max_speed, double step) {
  return std::make_unique<CurveMobility>(
      "constantAcceleration", plan, step,
      std::make_unique<ConstantAccelerationProfile>(accel, max_speed));
}

std::unique_ptr<MobilityModel> make_parametric_speed_mobility(std::span<const InterestPoint> plan,
                                                              std::vector<double> coeffs,
                                                              Seconds horizon, double step) {
  return std::make_unique<CurveMobility>(
      "parametricSpeed", plan, step,
      std::make_unique<PolynomialSpeedProfile>(std::move(coeffs), horizon));
}

}  // namespace iodsim
