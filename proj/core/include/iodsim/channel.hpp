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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iodsim/geometry.hpp"
#include "iodsim/world.hpp"

namespace iodsim {

inline constexpr double kSpeedOfLight = 299792458.0;

struct RadioParams {
  double tx_power_dbm = 20.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;
  double frequency_hz = 2.4e9;
  double noise_floor_dbm = -94.0;
  double rx_sensitivity_dbm = -82.0;
};

/// Received power: tx + gains - loss.
double rx_power(const RadioParams& p, double loss_db);
inline double snr(double rx_dbm, double noise_dbm) { return rx_dbm - noise_dbm; }

/// Path loss in dB between two points. All implementations are symmetric
/// and throw ZeroDistance for coincident points.
class PropagationLossModel {
 public:
  virtual ~PropagationLossModel() = default;
  virtual std::string_view name() const = 0;
  virtual double loss(const Vec3& a, const Vec3& b) const = 0;
};

class FriisLoss final : public PropagationLossModel {
 public:
  explicit FriisLoss(double frequency_hz);
  std::string_view name() const override { return "friis"; }
  double loss(const Vec3& a, const Vec3& b) const override;

 private:
  double frequency_;
};

class LogDistanceLoss final : public PropagationLossModel {
 public:
  LogDistanceLoss(double exponent = 3.0, double reference_loss_db = 46.6777,
                  double reference_distance_m = 1.0);
  std::string_view name() const override { return "logDistance"; }
  double loss(const Vec3& a, const Vec3& b) const override;

 private:
  double exponent_;
  double reference_loss_;
  double reference_distance_;
};

/// Urban Okumura-Hata with the small/medium-city mobile antenna
/// correction. Without explicit heights, the higher endpoint is the base
/// station and the lower one (at least 1 m) the mobile.
class OkumuraHataLoss final : public PropagationLossModel {
 public:
  /// Throws FrequencyOutOfRange outside 150-1500 MHz.
  OkumuraHataLoss(double frequency_hz, std::optional<double> bs_height = std::nullopt,
                  std::optional<double> ue_height = std::nullopt);
  std::string_view name() const override { return "okumuraHata"; }
  double loss(const Vec3& a, const Vec3& b) const override;

  /// Closed form for explicit heights and distance.
  static double hata(double frequency_hz, double bs_height, double ue_height, double distance_m);

 private:
  double frequency_;
  std::optional<double> bs_height_;
  std::optional<double> ue_height_;
};

using WallLossTable = std::array<double, 4>;  ///< indexed by WallMaterial
WallLossTable default_wall_losses();

/// Base model plus a fixed loss for every building boundary crossed.
class HybridBuildingsLoss final : public PropagationLossModel {
 public:
  HybridBuildingsLoss(std::unique_ptr<PropagationLossModel> base, const World& world,
                      WallLossTable wall_loss = default_wall_losses());
  std::string_view name() const override { return "hybridBuildings"; }
  double loss(const Vec3& a, const Vec3& b) const override;
  const PropagationLossModel& base() const { return *base_; }

 private:
  std::unique_ptr<PropagationLossModel> base_;
  const World& world_;
  WallLossTable wall_loss_;
};

struct RateRow {
  double min_snr_db = 0.0;
  double rate_bps = 0.0;
};
using RateTable = std::vector<RateRow>;

RateTable default_rate_table();

/// Highest rate whose threshold is <= snr; 0 below the first row.
/// Throws EmptyTable.
double select_rate(double snr_db, const RateTable& table);

}  // namespace iodsim
