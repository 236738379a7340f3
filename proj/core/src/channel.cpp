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
#include "iodsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "iodsim/error.hpp"

namespace iodsim {

namespace {

double checked_distance(const Vec3& a, const Vec3& b) {
  const double d = distance(a, b);
  if (!(d > 0.0)) throw SimError(Errc::zero_distance, "path loss between coincident points");
  return d;
}

}  // namespace

double rx_power(const RadioParams& p, double loss_db) {
  return p.tx_power_dbm + p.tx_gain_dbi + p.rx_gain_dbi - loss_db;
}

FriisLoss::FriisLoss(double frequency_hz) : frequency_(frequency_hz) {
  if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
    throw SimError(Errc::frequency_out_of_range, "frequency must be positive");
  }
}

double FriisLoss::loss(const Vec3& a, const Vec3& b) const {
  const double d = checked_distance(a, b);
  return 20.0 * std::log10(4.0 * std::numbers::pi * d * frequency_ / kSpeedOfLight);
}

LogDistanceLoss::LogDistanceLoss(double exponent, double reference_loss_db,
                                 double reference_distance_m)
    : exponent_(exponent),
      reference_loss_(reference_loss_db),
      reference_distance_(reference_distance_m) {}

double LogDistanceLoss::loss(const Vec3& a, const Vec3& b) const {
  const double d = checked_distance(a, b);
  return reference_loss_ + 10.0 * exponent_ * std::log10(d / reference_distance_);
}

OkumuraHataLoss::OkumuraHataLoss(double frequency_hz, std::optional<double> bs_height,
                                 std::optional<double> ue_height)
    : frequency_(frequency_hz), bs_height_(bs_height), ue_height_(ue_height) {
  if (!(frequency_hz >= 150e6 && frequency_hz <= 1500e6)) {
    throw SimError(Errc::frequency_out_of_range, "Okumura-Hata is defined for 150-1500 MHz");
  }
}

double OkumuraHataLoss::hata(double frequency_hz, double bs_height, double ue_height,
                             double distance_m) {
  const double lf = std::log10(frequency_hz / 1e6);
  const double a_hm = (1.1 * lf - 0.7) * ue_height - (1.56 * lf - 0.8);
  return 69.55 + 26.16 * lf - 13.82 * std::log10(bs_height) - a_hm +
         (44.9 - 6.55 * std::log10(bs_height)) * std::log10(distance_m / 1000.0);
}

double OkumuraHataLoss::loss(const Vec3& a, const Vec3& b) const {
  const double d = checked_distance(a, b);
  const double hb = bs_height_.value_or(std::max(1.0, std::max(a.z, b.z)));
  const double hm = ue_height_.value_or(std::max(1.0, std::min(a.z, b.z)));
  return hata(frequency_, hb, hm, d);
}

WallLossTable default_wall_losses() { return {5.0, 12.0, 15.0, 20.0}; }

HybridBuildingsLoss::HybridBuildingsLoss(std::unique_ptr<PropagationLossModel> base,
                                         const World& world, WallLossTable wall_loss)
    : base_(std::move(base)), world_(world), wall_loss_(wall_loss) {}

double HybridBuildingsLoss::loss(const Vec3& a, const Vec3& b) const {
  double l = base_->loss(a, b);
  for (const auto& c : world_.wall_crossings(a, b)) {
    l += c.count * wall_loss_[static_cast<std::size_t>(c.material)];
  }
  return l;
}

RateTable default_rate_table() {
  return {{6, 6e6}, {10, 12e6}, {14, 24e6}, {18, 36e6},
          {24, 54e6}, {30, 72e6}, {40, 100e6}, {60, 150e6}};
}

double select_rate(double snr_db, const RateTable& table) {
  if (table.empty()) throw SimError(Errc::empty_table, "rate table has no rows");
  double rate = 0.0;
  for (const auto& row : table) {
    if (row.min_snr_db <= snr_db) rate = std::max(rate, row.rate_bps);
  }
  return rate;
}

}  // namespace iodsim
