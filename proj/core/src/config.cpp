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
#include "iodsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "iodsim/apps.hpp"
#include "iodsim/energy.hpp"
#include "iodsim/error.hpp"

namespace iodsim {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// Walks one JSON object, records which keys were read and reports the rest
// as unknown.
class Reader {
 public:
  Reader(const json* j, std::string path, ValidationReport& rep)
      : j_(j), path_(std::move(path)), rep_(rep) {
    if (j_ != nullptr && !j_->is_object()) {
      error("", "expected an object");
      j_ = nullptr;
    }
  }
  ~Reader() {
    if (j_ == nullptr) return;
    for (const auto& [k, v] : j_->items()) {
      if (!used_.count(k)) rep_.warnings.push_back({at(k), "unknown key ignored"});
    }
  }
  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  bool valid() const { return j_ != nullptr; }
  const std::string& path() const { return path_; }
  ValidationReport& report() { return rep_; }
  std::string at(std::string_view key) const { return path_ + "/" + std::string(key); }

  void error(std::string_view key, std::string msg) {
    rep_.errors.push_back({key.empty() ? path_ : at(key), std::move(msg)});
  }
  void warn(std::string_view key, std::string msg) {
    rep_.warnings.push_back({key.empty() ? path_ : at(key), std::move(msg)});
  }

  const json* get(std::string_view key) {
    if (j_ == nullptr) return nullptr;
    used_.insert(std::string(key));
    auto it = j_->find(std::string(key));
    return it == j_->end() ? nullptr : &*it;
  }
  bool has(std::string_view key) const { return j_ != nullptr && j_->contains(std::string(key)); }

  std::optional<double> number(std::string_view key, bool required = false) {
    const json* v = get(key);
    if (v == nullptr) {
      if (required) error(key, "missing mandatory number");
      return std::nullopt;
    }
    if (v->is_number()) return v->get<double>();
    if (v->is_string()) {
      // staticConfig style values may arrive as strings.
      try {
        std::size_t used = 0;
        const std::string s = v->get<std::string>();
        const double d = std::stod(s, &used);
        if (used == s.size()) return d;
      } catch (...) {
      }
    }
    error(key, "expected a number");
    return std::nullopt;
  }
  double number_or(std::string_view key, double def) { return number(key).value_or(def); }

  std::optional<bool> boolean(std::string_view key, bool required = false) {
    const json* v = get(key);
    if (v == nullptr) {
      if (required) error(key, "missing mandatory boolean");
      return std::nullopt;
    }
    if (v->is_boolean()) return v->get<bool>();
    error(key, "expected a boolean");
    return std::nullopt;
  }

  std::optional<std::string> string(std::string_view key, bool required = false) {
    const json* v = get(key);
    if (v == nullptr) {
      if (required) error(key, "missing mandatory string");
      return std::nullopt;
    }
    if (v->is_string()) return v->get<std::string>();
    error(key, "expected a string");
    return std::nullopt;
  }

  std::optional<std::uint64_t> count(std::string_view key, bool required = false) {
    auto d = number(key, required);
    if (!d) return std::nullopt;
    if (*d < 0 || std::floor(*d) != *d || *d > 1.8e19) {
      error(key, "expected a non-negative integer");
      return std::nullopt;
    }
    return static_cast<std::uint64_t>(*d);
  }

  const json* array(std::string_view key, bool required = false) {
    const json* v = get(key);
    if (v == nullptr) {
      if (required) error(key, "missing mandatory array");
      return nullptr;
    }
    if (!v->is_array()) {
      error(key, "expected an array");
      return nullptr;
    }
    return v;
  }

  std::optional<std::vector<double>> numbers(std::string_view key, std::size_t n,
                                             bool required = false) {
    const json* v = array(key, required);
    if (v == nullptr) return std::nullopt;
    if (n != 0 && v->size() != n) {
      error(key, fmt::format("expected {} numbers", n));
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number()) {
        error(key, "expected only numbers");
        return std::nullopt;
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::optional<Vec3> vec3(std::string_view key, bool required = false) {
    auto v = numbers(key, 3, required);
    if (!v) return std::nullopt;
    return Vec3{(*v)[0], (*v)[1], (*v)[2]};
  }

 private:
  const json* j_;
  std::string path_;
  ValidationReport& rep_;
  std::set<std::string> used_;
};

std::string idx(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

bool contiguous_mask(Ipv4 m) {
  const Ipv4 inv = ~m;
  return (inv & (inv + 1)) == 0;
}

std::optional<Ipv4> read_ipv4(Reader& r, std::string_view key, bool required = false) {
  auto s = r.string(key, required);
  if (!s) return std::nullopt;
  auto a = parse_ipv4(*s);
  if (!a) r.error(key, "not a dotted-quad IPv4 address");
  return a;
}

std::optional<Box3> read_box(const json& v, const std::string& path, ValidationReport& rep) {
  if (!v.is_array() || v.size() != 6) {
    rep.errors.push_back({path, "expected [x1, x2, y1, y2, z1, z2]"});
    return std::nullopt;
  }
  std::array<double, 6> a{};
  for (std::size_t i = 0; i < 6; ++i) {
    if (!v[i].is_number()) {
      rep.errors.push_back({path, "box coordinates must be numbers"});
      return std::nullopt;
    }
    a[i] = v[i].get<double>();
  }
  try {
    return Box3::from_array(a);
  } catch (const SimError& e) {
    rep.errors.push_back({path, e.what()});
    return std::nullopt;
  }
}

// ---- static config ----------------------------------------------------------------

void read_static(const json& arr, const std::string& path, StaticConfig& sc,
                 ValidationReport& rep) {
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Reader r(&arr[i], idx(path, i), rep);
    if (!r.valid()) continue;
    auto name = r.string("name", true);
    if (!name) continue;
    const json* value = r.get("value");
    if (value == nullptr) {
      r.error("value", "missing mandatory value");
      continue;
    }
    auto num = [&](double lo_exclusive) -> std::optional<double> {
      auto d = r.number("value");
      if (d && !(*d > lo_exclusive && std::isfinite(*d))) {
        r.error("value", fmt::format("{} must be > {}", *name, lo_exclusive));
        return std::nullopt;
      }
      return d;
    };
    const std::string& n = *name;
    if (n == "MobilityUpdateInterval") {
      if (auto d = num(0)) sc.mobility_update_interval = *d;
    } else if (n == "TrajectorySamplingInterval") {
      if (auto d = num(0)) sc.trajectory_sampling_interval = *d;
    } else if (n == "BackboneDataRate") {
      if (auto d = num(0)) sc.backbone_data_rate = *d;
    } else if (n == "BackboneDelay") {
      if (auto d = num(-1e-300)) sc.backbone_delay = *d;
    } else if (n == "Mss") {
      if (auto d = num(0)) sc.mss = static_cast<std::size_t>(*d);
    } else if (n == "ReliableWindow") {
      if (auto d = num(0)) sc.reliable_window = static_cast<std::size_t>(*d);
    } else if (n == "RetransmissionTimeout") {
      if (auto d = num(0)) sc.retransmission_timeout = *d;
    } else if (n == "ConnectionTimeout") {
      if (auto d = num(0)) sc.connection_timeout = *d;
    } else if (n == "ReportWallClock") {
      if (value->is_boolean()) {
        sc.report_wall_clock = value->get<bool>();
      } else {
        r.error("value", "ReportWallClock expects a boolean");
      }
    } else if (n == "SnrTable") {
      RateTable t;
      bool ok = value->is_array() && !value->empty();
      if (ok) {
        for (const auto& row : *value) {
          if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number() ||
              row[1].get<double>() < 0) {
            ok = false;
            break;
          }
          t.push_back({row[0].get<double>(), row[1].get<double>()});
        }
      }
      if (ok) {
        ok = std::is_sorted(t.begin(), t.end(), [](const RateRow& a, const RateRow& b) {
          return a.min_snr_db < b.min_snr_db;
        });
      }
      if (ok) {
        sc.snr_table = t;
      } else {
        r.error("value", "SnrTable expects non-empty [[minSnrDb, rateBps], ...] sorted by SNR");
      }
    } else {
      r.get("value");
      r.warn("name", "unknown static setting '" + n + "' ignored");
    }
  }
}

// ---- layers -----------------------------------------------------------------------

void read_loss(Reader& r, LossConfig& lc, double frequency, bool nested) {
  auto type = r.string("type", true);
  if (!type) return;
  lc.type = *type;
  if (lc.type == "friis") {
    return;
  }
  if (lc.type == "logDistance") {
    lc.exponent = r.number_or("exponent", lc.exponent);
    lc.reference_loss = r.number_or("referenceLoss", lc.reference_loss);
    lc.reference_distance = r.number_or("referenceDistance", lc.reference_distance);
    if (!(lc.reference_distance > 0)) r.error("referenceDistance", "must be > 0");
    return;
  }
  if (lc.type == "okumuraHata") {
    lc.bs_height = r.number("bsHeight");
    lc.ue_height = r.number("ueHeight");
    if (lc.bs_height && !(*lc.bs_height > 0)) r.error("bsHeight", "must be > 0");
    if (lc.ue_height && !(*lc.ue_height > 0)) r.error("ueHeight", "must be > 0");
    if (!(frequency >= 150e6 && frequency <= 1500e6)) {
      r.error("type", "FrequencyOutOfRange: Okumura-Hata is defined for 150-1500 MHz");
    }
    return;
  }
  if (lc.type == "hybridBuildings" && !nested) {
    lc.base = std::make_shared<LossConfig>();
    if (r.has("base")) {
      Reader b(r.get("base"), r.at("base"), r.report());
      if (b.valid()) read_loss(b, *lc.base, frequency, true);
    }
    if (r.has("wallLoss")) {
      Reader w(r.get("wallLoss"), r.at("wallLoss"), r.report());
      for (auto m : {WallMaterial::wood, WallMaterial::concrete_with_windows,
                     WallMaterial::concrete_without_windows, WallMaterial::stone_blocks}) {
        const auto key = to_string(m);
        if (auto d = w.number(key)) {
          if (*d < 0) {
            w.error(key, "wall loss must be >= 0 dB");
          } else {
            lc.wall_losses[static_cast<std::size_t>(m)] = *d;
          }
        }
      }
    }
    return;
  }
  r.error("type", "unknown propagation loss model '" + lc.type + "'");
}

void read_phy(Reader& r, PhyConfig& pc) {
  auto type = r.string("type", true);
  if (type) {
    if (*type != "wifi" && *type != "lte") r.error("type", "expected 'wifi' or 'lte'");
    pc.type = *type;
  }
  auto& rp = pc.radio;
  rp.frequency_hz = r.number_or("frequency", rp.frequency_hz);
  rp.tx_power_dbm = r.number_or("txPower", rp.tx_power_dbm);
  rp.tx_gain_dbi = r.number_or("txGain", rp.tx_gain_dbi);
  rp.rx_gain_dbi = r.number_or("rxGain", rp.rx_gain_dbi);
  rp.noise_floor_dbm = r.number_or("noiseFloor", rp.noise_floor_dbm);
  rp.rx_sensitivity_dbm = r.number_or("rxSensitivity", rp.rx_sensitivity_dbm);
  if (!(rp.frequency_hz > 0) || !std::isfinite(rp.frequency_hz)) {
    r.error("frequency", "must be > 0 Hz");
  }
  if (rp.rx_sensitivity_dbm < rp.noise_floor_dbm) {
    r.error("rxSensitivity", "sensitivity below the noise floor");
  }
  if (r.has("propagationLossModel")) {
    Reader l(r.get("propagationLossModel"), r.at("propagationLossModel"), r.report());
    if (l.valid()) read_loss(l, pc.loss, rp.frequency_hz, false);
  }
  if (const json* dr = r.get("dataRate")) {
    if (dr->is_number()) {
      pc.fixed_rate_bps = dr->get<double>();
    } else if (dr->is_string() && dr->get<std::string>() == "snrTable") {
      pc.fixed_rate_bps.reset();
    } else {
      Reader d(dr, r.at("dataRate"), r.report());
      if (d.valid()) {
        auto t = d.string("type", true);
        if (t && *t == "fixed") {
          pc.fixed_rate_bps = d.number("bps", true);
        } else if (t && *t != "snrTable") {
          d.error("type", "expected 'fixed' or 'snrTable'");
        }
      }
    }
    if (pc.fixed_rate_bps && !(*pc.fixed_rate_bps > 0)) r.error("dataRate", "must be > 0 bps");
  }
  if (auto em = r.string("errorModel")) {
    if (*em == "threshold") {
      pc.probabilistic_loss = false;
    } else if (*em == "probabilistic") {
      pc.probabilistic_loss = true;
    } else {
      r.error("errorModel", "expected 'threshold' or 'probabilistic'");
    }
  }
}

void read_net(Reader& r, NetConfig& nc) {
  if (auto t = r.string("type", true)) {
    if (*t != "ipv4") r.error("type", "only 'ipv4' is supported");
  }
  if (auto a = read_ipv4(r, "address", true)) nc.address = *a;
  if (auto m = read_ipv4(r, "mask", true)) {
    nc.mask = *m;
    if (!contiguous_mask(nc.mask) || nc.mask == 0 || nc.mask == kBroadcast) {
      r.error("mask", "mask must be contiguous and leave room for hosts");
    }
  }
  nc.address &= nc.mask;
  if ((nc.address & kBusMask) == kBusNetwork || (kBusNetwork & nc.mask) == nc.address) {
    r.error("address", "overlaps the backbone network 200.0.0.0/8");
  }
}

// ---- entities -----------------------------------------------------------------------

struct DeviceTypeRef {
  std::string path;  ///< empty when the device did not name its type
  std::string type;
};

std::vector<NetDeviceConfig> read_devices(Reader& parent, DeviceRole default_role,
                                          std::vector<DeviceTypeRef>& types) {
  std::vector<NetDeviceConfig> out;
  const json* arr = parent.array("netDevices");
  if (arr == nullptr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    Reader r(&(*arr)[i], idx(parent.at("netDevices"), i), parent.report());
    if (!r.valid()) continue;
    NetDeviceConfig d;
    d.role = default_role;
    if (auto t = r.string("type")) {
      if (*t != "wifi" && *t != "lte") r.error("type", "expected 'wifi' or 'lte'");
      types.push_back({r.at("type"), *t});
    } else {
      types.push_back({"", ""});
    }
    if (auto n = r.count("networkLayer", true)) d.stack = *n;
    if (auto m = r.count("macLayer")) {
      if (*m != d.stack) r.error("macLayer", "must equal networkLayer");
    }
    if (auto role = r.string("role")) {
      if (*role == "access") {
        d.role = DeviceRole::access;
      } else if (*role == "station") {
        d.role = DeviceRole::station;
      } else {
        r.error("role", "expected 'access' or 'station'");
      }
    }
    if (r.has("bearers")) {
      r.get("bearers");
      r.warn("bearers", "bearers are not modelled; every flow shares the device");
    }
    if (r.has("energy")) {
      Reader e(r.get("energy"), r.at("energy"), r.report());
      d.energy.idle_w = e.number_or("idle", 0.0);
      d.energy.tx_w = e.number_or("tx", 0.0);
      d.energy.rx_w = e.number_or("rx", 0.0);
      if (d.energy.idle_w < 0 || d.energy.tx_w < 0 || d.energy.rx_w < 0) {
        e.error("", "radio power draws must be >= 0 W");
      }
    }
    out.push_back(d);
  }
  return out;
}

MobilityConfig read_mobility(Reader& r) {
  MobilityConfig mc;
  auto type = r.string("type", true);
  if (!type) return mc;
  mc.type = *type;
  if (mc.type == "constantPosition") {
    if (auto p = r.vec3("Position", true)) mc.position = *p;
    return mc;
  }
  if (mc.type != "constantAcceleration" && mc.type != "parametricSpeed") {
    r.error("type", "expected constantPosition, constantAcceleration or parametricSpeed");
    return mc;
  }
  if (const json* plan = r.array("FlightPlan", true)) {
    for (std::size_t i = 0; i < plan->size(); ++i) {
      Reader p(&(*plan)[i], idx(r.at("FlightPlan"), i), r.report());
      if (!p.valid()) continue;
      InterestPoint ip;
      if (auto v = p.vec3("position", true)) ip.position = *v;
      if (auto l = p.count("interest")) ip.level = static_cast<unsigned>(std::min<std::uint64_t>(*l, 1u << 20));
      if (auto rt = p.number("restTime")) {
        if (*rt < 0) p.error("restTime", "must be >= 0 s");
        ip.rest_time = *rt;
      }
      mc.plan.push_back(ip);
    }
  }
  if (auto s = r.number("CurveStep")) mc.curve_step = *s;
  if (mc.type == "constantAcceleration") {
    mc.acceleration = r.number("Acceleration", true).value_or(0.0);
    mc.max_speed = r.number("MaxSpeed", true).value_or(0.0);
  } else if (auto c = r.numbers("SpeedCoefficients", 0, true)) {
    mc.coefficients = *c;
    if (mc.coefficients.empty()) r.error("SpeedCoefficients", "at least one coefficient");
  }
  return mc;
}

// Builds the mobility once so every mobility contract violation surfaces
// at validation time.
void deep_check_mobility(const MobilityConfig& mc, Seconds horizon, const std::string& path,
                         ValidationReport& rep) {
  if (mc.type == "constantPosition") {
    if (!mc.position.finite()) rep.errors.push_back({path + "/Position", "must be finite"});
    return;
  }
  try {
    if (mc.type == "constantAcceleration") {
      make_constant_acceleration_mobility(mc.plan, mc.acceleration, mc.max_speed, mc.curve_step);
    } else if (mc.type == "parametricSpeed") {
      make_parametric_speed_mobility(mc.plan, mc.coefficients, horizon, mc.curve_step);
    }
  } catch (const SimError& e) {
    rep.errors.push_back({path, e.what()});
  }
}

PeripheralConfig read_peripheral(Reader& r) {
  PeripheralConfig pc;
  if (auto t = r.string("type", true)) {
    if (*t != "generic" && *t != "storage" && *t != "input") {
      r.error("type", "expected generic, storage or input");
    }
    pc.type = *t;
  }
  if (auto p = r.numbers("PowerConsumption", 3, true)) {
    std::copy(p->begin(), p->end(), pc.power.begin());
    if (pc.power[0] != 0.0) r.error("PowerConsumption", "OFF draw must be 0 W");
    if (pc.power[1] < 0 || pc.power[2] < 0) r.error("PowerConsumption", "draws must be >= 0 W");
  }
  if (const json* roi = r.array("RoITrigger")) {
    for (const auto& e : *roi) {
      if (!e.is_number_unsigned()) {
        r.error("RoITrigger", "expected region indices");
        break;
      }
      pc.roi_trigger.push_back(e.get<std::size_t>());
    }
  }
  if (pc.type == "storage") {
    if (auto c = r.count("Capacity", true)) pc.capacity = *c;
    if (auto c = r.count("InitialRemainingCapacity")) {
      if (*c > pc.capacity) r.error("InitialRemainingCapacity", "exceeds Capacity");
      pc.initial_remaining = *c;
    }
  } else if (pc.type == "input") {
    pc.data_rate = r.number("DataRate", true).value_or(0.0);
    pc.interval = r.number_or("DataAcquisitionTimeInterval", pc.interval);
    pc.has_storage = r.boolean("HasStorage").value_or(false);
    if (pc.data_rate < 0) r.error("DataRate", "must be >= 0 bps");
    if (!(pc.interval > 0)) r.error("DataAcquisitionTimeInterval", "must be > 0 s");
  }
  return pc;
}

std::optional<std::uint16_t> read_port(Reader& r, std::string_view key) {
  auto p = r.count(key);
  if (!p) return std::nullopt;
  if (*p == 0 || *p > 65535) {
    r.error(key, "port must be in 1..65535");
    return std::nullopt;
  }
  return static_cast<std::uint16_t>(*p);
}

AppConfig read_app(Reader& r) {
  AppConfig a;
  auto type = r.string("type", true);
  if (!type) return a;
  a.type = *type;
  a.start = r.number_or("StartTime", 0.0);
  a.stop = r.number("StopTime");
  if (a.start < 0) r.error("StartTime", "must be >= 0 s");
  if (a.stop && *a.stop < a.start) r.error("StopTime", "must not precede StartTime");

  if (a.type == "telemetryClient") {
    a.port = read_port(r, "Port").value_or(80);
    a.destination = read_ipv4(r, "DestinationIpv4Address");
    a.interval = r.number_or("TransmissionInterval", 1.0);
    a.free_data = r.boolean("FreeData").value_or(false);
    if (!(a.interval > 0)) r.error("TransmissionInterval", "must be > 0 s");
  } else if (a.type == "telemetryServer") {
    a.port = read_port(r, "Port").value_or(80);
    a.store_data = r.boolean("StoreData").value_or(false);
  } else if (a.type == "periodicClient" || a.type == "storageClient" ||
             a.type == "udpEchoClient") {
    if (auto ad = read_ipv4(r, "Address", true)) a.address = *ad;
    a.port = read_port(r, "Port").value_or(4242);
    if (auto ps = r.count("PayloadSize")) a.payload_size = *ps;
    if (a.type != "storageClient") {
      a.frequency = r.number_or("Frequency", 1.0);
      if (!(a.frequency > 0)) r.error("Frequency", "must be > 0 Hz");
    }
    if (a.payload_size == 0) r.error("PayloadSize", "must be > 0 bytes");
    if (a.type == "udpEchoClient" && a.payload_size + kPduHeaderBytes > 65507) {
      r.error("PayloadSize", "datagram exceeds 65507 bytes");
    }
  } else if (a.type == "echoServer") {
    if (r.has("Address")) read_ipv4(r, "Address");
    a.port = read_port(r, "Port").value_or(4242);
    a.echo = r.boolean("Echo").value_or(true);
  } else if (a.type == "nat") {
    a.internal_device = r.count("InternalNetDeviceId").value_or(0);
    a.external_device = r.count("ExternalNetDeviceId").value_or(1);
    if (a.internal_device == a.external_device) {
      r.error("ExternalNetDeviceId", "must differ from InternalNetDeviceId");
    }
  } else {
    r.error("type", "unknown application '" + a.type + "'");
  }
  return a;
}

std::vector<AppConfig> read_apps(Reader& parent) {
  std::vector<AppConfig> out;
  const json* arr = parent.array("applications");
  if (arr == nullptr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    Reader r(&(*arr)[i], idx(parent.at("applications"), i), parent.report());
    if (r.valid()) out.push_back(read_app(r));
  }
  return out;
}

// ---- cross checks ---------------------------------------------------------------------

struct EntityRefs {
  std::string path;
  std::vector<DeviceTypeRef> device_types;
};

void check_devices(const std::vector<NetDeviceConfig>& devs, const EntityRefs& refs,
                   const ScenarioConfig& cfg, ValidationReport& rep) {
  for (std::size_t i = 0; i < devs.size(); ++i) {
    const std::string p = idx(refs.path + "/netDevices", i);
    if (devs[i].stack >= cfg.phy.size()) {
      rep.errors.push_back({p + "/networkLayer", "no such layer stack"});
      continue;
    }
    const auto& t = refs.device_types[i];
    if (!t.type.empty() && t.type != cfg.phy[devs[i].stack].type) {
      rep.errors.push_back({t.path, "does not match the phyLayer type"});
    }
  }
}

void check_apps(const std::vector<AppConfig>& apps, std::size_t n_devices, bool has_storage,
                bool is_remote, const std::string& path, ValidationReport& rep) {
  for (std::size_t i = 0; i < apps.size(); ++i) {
    const auto& a = apps[i];
    const std::string p = idx(path + "/applications", i);
    if (a.type == "storageClient" && !has_storage) {
      rep.errors.push_back({p, "storageClient needs a storage peripheral on the same drone"});
    }
    if (a.type == "nat") {
      if (is_remote) {
        rep.errors.push_back({p, "remotes have no radio devices to translate between"});
      } else if (a.internal_device >= n_devices || a.external_device >= n_devices) {
        rep.errors.push_back({p, "NAT device index out of range"});
      }
    }
  }
}

ojson loss_json(const LossConfig& lc) {
  ojson j;
  j["type"] = lc.type;
  if (lc.type == "logDistance") {
    j["exponent"] = lc.exponent;
    j["referenceLoss"] = lc.reference_loss;
    j["referenceDistance"] = lc.reference_distance;
  } else if (lc.type == "okumuraHata") {
    if (lc.bs_height) j["bsHeight"] = *lc.bs_height;
    if (lc.ue_height) j["ueHeight"] = *lc.ue_height;
  } else if (lc.type == "hybridBuildings") {
    j["base"] = lc.base ? loss_json(*lc.base) : ojson{{"type", "friis"}};
    ojson w;
    for (auto m : {WallMaterial::wood, WallMaterial::concrete_with_windows,
                   WallMaterial::concrete_without_windows, WallMaterial::stone_blocks}) {
      w[std::string(to_string(m))] = lc.wall_losses[static_cast<std::size_t>(m)];
    }
    j["wallLoss"] = w;
  }
  return j;
}

ojson vec_json(const Vec3& v) { return ojson::array({v.x, v.y, v.z}); }

ojson mobility_json(const MobilityConfig& mc) {
  ojson j;
  j["type"] = mc.type;
  if (mc.type == "constantPosition") {
    j["Position"] = vec_json(mc.position);
    return j;
  }
  ojson plan = ojson::array();
  for (const auto& p : mc.plan) {
    plan.push_back({{"position", vec_json(p.position)}, {"interest", p.level},
                    {"restTime", p.rest_time}});
  }
  j["FlightPlan"] = plan;
  if (mc.type == "constantAcceleration") {
    j["Acceleration"] = mc.acceleration;
    j["MaxSpeed"] = mc.max_speed;
  } else {
    j["SpeedCoefficients"] = mc.coefficients;
  }
  j["CurveStep"] = mc.curve_step;
  return j;
}

ojson devices_json(const std::vector<NetDeviceConfig>& devs, const ScenarioConfig& cfg) {
  ojson arr = ojson::array();
  for (const auto& d : devs) {
    ojson j;
    j["type"] = d.stack < cfg.phy.size() ? cfg.phy[d.stack].type : "";
    j["networkLayer"] = d.stack;
    j["role"] = to_string(d.role);
    j["energy"] = {{"idle", d.energy.idle_w}, {"tx", d.energy.tx_w}, {"rx", d.energy.rx_w}};
    arr.push_back(j);
  }
  return arr;
}

ojson apps_json(const std::vector<AppConfig>& apps, Seconds duration) {
  ojson arr = ojson::array();
  for (const auto& a : apps) {
    ojson j;
    j["type"] = a.type;
    j["StartTime"] = a.start;
    j["StopTime"] = a.stop.value_or(duration);
    if (a.type == "telemetryClient") {
      j["DestinationIpv4Address"] = format_ipv4(a.destination.value_or(kBroadcast));
      j["Port"] = a.port;
      j["TransmissionInterval"] = a.interval;
      j["FreeData"] = a.free_data;
    } else if (a.type == "telemetryServer") {
      j["Port"] = a.port;
      j["StoreData"] = a.store_data;
    } else if (a.type == "echoServer") {
      j["Port"] = a.port;
      j["Echo"] = a.echo;
    } else if (a.type == "nat") {
      j["InternalNetDeviceId"] = a.internal_device;
      j["ExternalNetDeviceId"] = a.external_device;
    } else {
      j["Address"] = format_ipv4(a.address);
      j["Port"] = a.port;
      j["PayloadSize"] = a.payload_size;
      if (a.type != "storageClient") j["Frequency"] = a.frequency;
    }
    arr.push_back(j);
  }
  return arr;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

const std::vector<std::string>& known_log_components() {
  static const std::vector<std::string> names{
      "all",      "engine",  "world",     "mobility", "entities", "peripherals", "energy",
      "channel",  "network", "transport", "apps",     "config",   "report"};
  return names;
}

ParseResult parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte);
    std::string what = e.what();
    // Drop the library's "[json.exception.parse_error.101] " prefix.
    if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
    throw SimError(Errc::syntax_error, fmt::format("line {}, column {}: {}", line, col, what));
  }

  ParseResult out;
  ValidationReport& rep = out.report;
  ScenarioConfig cfg;
  std::vector<EntityRefs> drone_refs, zsp_refs;
  {
    Reader r(&doc, "", rep);
    if (!r.valid()) return out;

    if (auto n = r.string("name", true)) cfg.name = *n;
    cfg.dry_run = r.boolean("dryRun").value_or(false);
    cfg.results_path = r.string("resultsPath").value_or("results");
    cfg.log_on_file = r.boolean("logOnFile").value_or(false);
    if (auto d = r.number("duration", true)) {
      cfg.duration = *d;
      if (!(*d > 0) || !std::isfinite(*d)) r.error("duration", "must be > 0 s");
    }
    if (auto s = r.count("seed")) cfg.seed = *s;

    const bool a = r.has("staticConfig"), b = r.has("staticNs3Config");
    if (a && b) r.error("staticNs3Config", "give staticConfig or its alias, not both");
    const char* sk = b && !a ? "staticNs3Config" : "staticConfig";
    if (const json* sc = r.array(sk)) read_static(*sc, r.at(sk), cfg.static_config, rep);

    if (r.has("world")) {
      Reader w(r.get("world"), "/world", rep);
      if (const json* bs = w.array("buildings")) {
        for (std::size_t i = 0; i < bs->size(); ++i) {
          Reader br(&(*bs)[i], idx("/world/buildings", i), rep);
          if (!br.valid()) continue;
          Building bld;
          if (auto t = br.string("type")) {
            if (auto bt = parse_building_type(*t)) {
              bld.type = *bt;
            } else {
              br.error("type", "unknown building type");
            }
          }
          if (auto t = br.string("walls")) {
            if (auto wm = parse_wall_material(*t)) {
              bld.walls = *wm;
            } else {
              br.error("walls", "unknown wall material");
            }
          }
          if (const json* bb = br.get("boundaries")) {
            if (auto box = read_box(*bb, br.at("boundaries"), rep)) bld.bounds = *box;
          } else {
            br.error("boundaries", "missing mandatory box");
          }
          if (auto f = br.count("floors")) bld.floors = static_cast<int>(std::max<std::uint64_t>(1, *f));
          if (auto rm = br.numbers("rooms", 2)) {
            bld.rooms_x = std::max(1, static_cast<int>((*rm)[0]));
            bld.rooms_y = std::max(1, static_cast<int>((*rm)[1]));
          }
          cfg.world.buildings.push_back(bld);
        }
      }
      if (const json* rs = w.array("regionsOfInterest")) {
        for (std::size_t i = 0; i < rs->size(); ++i) {
          if (auto box = read_box((*rs)[i], idx("/world/regionsOfInterest", i), rep)) {
            cfg.world.regions.push_back(*box);
          }
        }
      }
    }

    if (const json* arr = r.array("phyLayer")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        Reader pr(&(*arr)[i], idx("/phyLayer", i), rep);
        PhyConfig pc;
        if (pr.valid()) read_phy(pr, pc);
        cfg.phy.push_back(pc);
      }
    }
    if (const json* arr = r.array("macLayer")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        Reader mr(&(*arr)[i], idx("/macLayer", i), rep);
        MacConfig mc;
        if (mr.valid()) {
          mc.type = mr.string("type", true).value_or("wifi");
          mr.get("ssid");
          mr.get("standard");
        }
        cfg.mac.push_back(mc);
      }
    }
    if (const json* arr = r.array("networkLayer")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        Reader nr(&(*arr)[i], idx("/networkLayer", i), rep);
        NetConfig nc;
        if (nr.valid()) read_net(nr, nc);
        cfg.net.push_back(nc);
      }
    }
    if (cfg.mac.size() != cfg.phy.size() || cfg.net.size() != cfg.phy.size()) {
      r.error("macLayer", "phyLayer, macLayer and networkLayer need the same length");
    }
    for (std::size_t i = 0; i < cfg.mac.size() && i < cfg.phy.size(); ++i) {
      if (cfg.mac[i].type != cfg.phy[i].type) {
        rep.errors.push_back({idx("/macLayer", i) + "/type", "does not match the phyLayer type"});
      }
    }

    if (const json* arr = r.array("drones")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const std::string p = idx("/drones", i);
        Reader dr(&(*arr)[i], p, rep);
        if (!dr.valid()) continue;
        DroneConfig d;
        EntityRefs refs{p, {}};
        if (dr.has("mechanics")) {
          Reader m(dr.get("mechanics"), p + "/mechanics", rep);
          d.mechanics.mass = m.number_or("Mass", d.mechanics.mass);
          d.mechanics.rotor_disk_area = m.number_or("RotorDiskArea", d.mechanics.rotor_disk_area);
          d.mechanics.drag_coefficient = m.number_or("DragCoefficient", d.mechanics.drag_coefficient);
          d.mechanics.air_density = m.number_or("AirDensity", d.mechanics.air_density);
          if (!(d.mechanics.mass > 0)) m.error("Mass", "NonPositiveMass: must be > 0 kg");
          if (!(d.mechanics.rotor_disk_area > 0)) m.error("RotorDiskArea", "must be > 0 m2");
          if (d.mechanics.drag_coefficient < 0) m.error("DragCoefficient", "must be >= 0");
          if (!(d.mechanics.air_density > 0)) m.error("AirDensity", "must be > 0 kg/m3");
        }
        if (dr.has("mobilityModel")) {
          Reader m(dr.get("mobilityModel"), p + "/mobilityModel", rep);
          if (m.valid()) d.mobility = read_mobility(m);
        } else {
          dr.error("mobilityModel", "missing mandatory mobility model");
        }
        if (dr.has("battery")) {
          Reader bt(dr.get("battery"), p + "/battery", rep);
          auto j = bt.number("capacityJ");
          auto v = bt.number("cellVoltageV");
          auto mah = bt.number("capacitymAh");
          if (j && (v || mah)) bt.error("capacityJ", "give capacityJ or cellVoltageV+capacitymAh");
          if (j) {
            d.battery.joules = *j;
          } else if (v && mah) {
            d.battery.joules = EnergySource::joules_from_cell(*v, *mah);
          } else if (v || mah) {
            bt.error("", "cellVoltageV and capacitymAh go together");
          }
          if (!(d.battery.joules > 0)) bt.error("", "battery capacity must be > 0 J");
          d.battery.sampling_interval = bt.number_or("samplingInterval", 0.1);
          if (!(d.battery.sampling_interval > 0)) bt.error("samplingInterval", "must be > 0 s");
        }
        if (const json* ps = dr.array("peripherals")) {
          for (std::size_t k = 0; k < ps->size(); ++k) {
            Reader pr(&(*ps)[k], idx(p + "/peripherals", k), rep);
            if (pr.valid()) d.peripherals.push_back(read_peripheral(pr));
          }
        }
        d.net_devices = read_devices(dr, DeviceRole::station, refs.device_types);
        d.applications = read_apps(dr);
        cfg.drones.push_back(std::move(d));
        drone_refs.push_back(std::move(refs));
      }
    }
    if (const json* arr = r.array("zsps")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const std::string p = idx("/zsps", i);
        Reader zr(&(*arr)[i], p, rep);
        if (!zr.valid()) continue;
        ZspConfig z;
        EntityRefs refs{p, {}};
        if (zr.has("mobilityModel")) {
          if (zr.has("position")) zr.error("position", "give position or mobilityModel, not both");
          Reader m(zr.get("mobilityModel"), p + "/mobilityModel", rep);
          if (m.valid()) z.mobility = read_mobility(m);
        } else if (auto pos = zr.vec3("position", true)) {
          z.mobility.position = *pos;
        }
        z.net_devices = read_devices(zr, DeviceRole::access, refs.device_types);
        z.applications = read_apps(zr);
        cfg.zsps.push_back(std::move(z));
        zsp_refs.push_back(std::move(refs));
      }
    }
    if (const json* arr = r.array("remotes")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        Reader rr(&(*arr)[i], idx("/remotes", i), rep);
        if (!rr.valid()) continue;
        RemoteConfig rc;
        rc.applications = read_apps(rr);
        cfg.remotes.push_back(std::move(rc));
      }
    }
    if (const json* arr = r.array("logComponents")) {
      const auto& known = known_log_components();
      for (std::size_t i = 0; i < arr->size(); ++i) {
        if (!(*arr)[i].is_string()) {
          rep.errors.push_back({idx("/logComponents", i), "expected a string"});
          continue;
        }
        auto s = (*arr)[i].get<std::string>();
        if (std::find(known.begin(), known.end(), s) == known.end()) {
          rep.warnings.push_back({idx("/logComponents", i), "unknown log component ignored"});
        } else {
          cfg.log_components.push_back(s);
        }
      }
    }
  }

  if (cfg.drones.empty()) rep.warnings.push_back({"/drones", "no drones defined"});

  for (std::size_t i = 0; i < cfg.drones.size(); ++i) {
    const auto& d = cfg.drones[i];
    const std::string p = drone_refs[i].path;
    if (cfg.duration > 0) deep_check_mobility(d.mobility, cfg.duration, p + "/mobilityModel", rep);
    check_devices(d.net_devices, drone_refs[i], cfg, rep);
    std::size_t storages = 0;
    for (std::size_t k = 0; k < d.peripherals.size(); ++k) {
      const auto& pc = d.peripherals[k];
      const std::string pp = idx(p + "/peripherals", k);
      if (pc.type == "storage" && ++storages > 1) {
        rep.errors.push_back({pp, "at most one storage peripheral per drone"});
      }
      for (auto id : pc.roi_trigger) {
        if (id >= cfg.world.regions.size()) {
          rep.errors.push_back({pp + "/RoITrigger", fmt::format("UnknownRegion: {}", id)});
        }
      }
    }
    for (std::size_t k = 0; k < d.peripherals.size(); ++k) {
      if (d.peripherals[k].has_storage && storages == 0) {
        rep.errors.push_back(
            {idx(p + "/peripherals", k) + "/HasStorage", "no storage peripheral on this drone"});
      }
    }
    check_apps(d.applications, d.net_devices.size(), storages > 0, false, p, rep);
  }
  for (std::size_t i = 0; i < cfg.zsps.size(); ++i) {
    const auto& z = cfg.zsps[i];
    const std::string p = zsp_refs[i].path;
    if (cfg.duration > 0) deep_check_mobility(z.mobility, cfg.duration, p + "/mobilityModel", rep);
    check_devices(z.net_devices, zsp_refs[i], cfg, rep);
    check_apps(z.applications, z.net_devices.size(), false, false, p, rep);
  }
  for (std::size_t i = 0; i < cfg.remotes.size(); ++i) {
    check_apps(cfg.remotes[i].applications, 0, false, true, idx("/remotes", i), rep);
  }

  if (rep.ok()) out.config = std::move(cfg);
  return out;
}

ParseResult load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimError(Errc::io_error, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

nlohmann::ordered_json to_json(const ScenarioConfig& cfg) {
  ojson j;
  j["name"] = cfg.name;
  j["dryRun"] = cfg.dry_run;
  j["resultsPath"] = cfg.results_path;
  j["logOnFile"] = cfg.log_on_file;
  j["duration"] = cfg.duration;
  j["seed"] = cfg.seed;

  const auto& sc = cfg.static_config;
  ojson table = ojson::array();
  for (const auto& row : sc.snr_table) table.push_back({row.min_snr_db, row.rate_bps});
  j["staticConfig"] = ojson::array({
      {{"name", "MobilityUpdateInterval"}, {"value", sc.mobility_update_interval}},
      {{"name", "TrajectorySamplingInterval"}, {"value", sc.trajectory_sampling_interval}},
      {{"name", "BackboneDataRate"}, {"value", sc.backbone_data_rate}},
      {{"name", "BackboneDelay"}, {"value", sc.backbone_delay}},
      {{"name", "Mss"}, {"value", sc.mss}},
      {{"name", "ReliableWindow"}, {"value", sc.reliable_window}},
      {{"name", "RetransmissionTimeout"}, {"value", sc.retransmission_timeout}},
      {{"name", "ConnectionTimeout"}, {"value", sc.connection_timeout}},
      {{"name", "SnrTable"}, {"value", table}},
      {{"name", "ReportWallClock"}, {"value", sc.report_wall_clock}},
  });

  ojson buildings = ojson::array();
  for (const auto& b : cfg.world.buildings) {
    buildings.push_back({{"type", to_string(b.type)},
                         {"walls", to_string(b.walls)},
                         {"boundaries", b.bounds.to_array()},
                         {"floors", b.floors},
                         {"rooms", {b.rooms_x, b.rooms_y}}});
  }
  ojson regions = ojson::array();
  for (const auto& r : cfg.world.regions) regions.push_back(r.to_array());
  j["world"] = {{"buildings", buildings}, {"regionsOfInterest", regions}};

  ojson phy = ojson::array();
  for (const auto& p : cfg.phy) {
    ojson e;
    e["type"] = p.type;
    e["frequency"] = p.radio.frequency_hz;
    e["txPower"] = p.radio.tx_power_dbm;
    e["txGain"] = p.radio.tx_gain_dbi;
    e["rxGain"] = p.radio.rx_gain_dbi;
    e["noiseFloor"] = p.radio.noise_floor_dbm;
    e["rxSensitivity"] = p.radio.rx_sensitivity_dbm;
    e["propagationLossModel"] = loss_json(p.loss);
    if (p.fixed_rate_bps) {
      e["dataRate"] = {{"type", "fixed"}, {"bps", *p.fixed_rate_bps}};
    } else {
      e["dataRate"] = {{"type", "snrTable"}};
    }
    e["errorModel"] = p.probabilistic_loss ? "probabilistic" : "threshold";
    phy.push_back(e);
  }
  j["phyLayer"] = phy;
  ojson mac = ojson::array();
  for (const auto& m : cfg.mac) mac.push_back({{"type", m.type}});
  j["macLayer"] = mac;
  ojson net = ojson::array();
  for (const auto& n : cfg.net) {
    net.push_back({{"type", n.type}, {"address", format_ipv4(n.address)}, {"mask", format_ipv4(n.mask)}});
  }
  j["networkLayer"] = net;

  ojson drones = ojson::array();
  for (const auto& d : cfg.drones) {
    ojson e;
    e["mechanics"] = {{"Mass", d.mechanics.mass},
                      {"RotorDiskArea", d.mechanics.rotor_disk_area},
                      {"DragCoefficient", d.mechanics.drag_coefficient},
                      {"AirDensity", d.mechanics.air_density}};
    e["mobilityModel"] = mobility_json(d.mobility);
    e["battery"] = {{"capacityJ", d.battery.joules},
                    {"samplingInterval", d.battery.sampling_interval}};
    ojson ps = ojson::array();
    for (const auto& p : d.peripherals) {
      ojson pe;
      pe["type"] = p.type;
      pe["PowerConsumption"] = p.power;
      pe["RoITrigger"] = p.roi_trigger;
      if (p.type == "storage") {
        pe["Capacity"] = p.capacity;
        pe["InitialRemainingCapacity"] = p.initial_remaining.value_or(p.capacity);
      } else if (p.type == "input") {
        pe["DataRate"] = p.data_rate;
        pe["DataAcquisitionTimeInterval"] = p.interval;
        pe["HasStorage"] = p.has_storage;
      }
      ps.push_back(pe);
    }
    e["peripherals"] = ps;
    e["netDevices"] = devices_json(d.net_devices, cfg);
    e["applications"] = apps_json(d.applications, cfg.duration);
    drones.push_back(e);
  }
  j["drones"] = drones;

  ojson zsps = ojson::array();
  for (const auto& z : cfg.zsps) {
    ojson e;
    if (z.mobility.type == "constantPosition") {
      e["position"] = vec_json(z.mobility.position);
    } else {
      e["mobilityModel"] = mobility_json(z.mobility);
    }
    e["netDevices"] = devices_json(z.net_devices, cfg);
    e["applications"] = apps_json(z.applications, cfg.duration);
    zsps.push_back(e);
  }
  j["zsps"] = zsps;
  ojson remotes = ojson::array();
  for (const auto& r : cfg.remotes) remotes.push_back({{"applications", apps_json(r.applications, cfg.duration)}});
  j["remotes"] = remotes;
  j["logComponents"] = cfg.log_components;
  return j;
}

}  // namespace iodsim
