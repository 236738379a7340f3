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
#include "iodsim/scenario.hpp"

#include <cmath>

#include <fmt/format.h>

#include "iodsim/error.hpp"

namespace iodsim {

namespace {

std::unique_ptr<PropagationLossModel> make_loss(const LossConfig& lc, double frequency,
                                                const World& world) {
  if (lc.type == "friis") return std::make_unique<FriisLoss>(frequency);
  if (lc.type == "logDistance") {
    return std::make_unique<LogDistanceLoss>(lc.exponent, lc.reference_loss, lc.reference_distance);
  }
  if (lc.type == "okumuraHata") {
    return std::make_unique<OkumuraHataLoss>(frequency, lc.bs_height, lc.ue_height);
  }
  if (lc.type == "hybridBuildings") {
    LossConfig friis;
    auto base = make_loss(lc.base ? *lc.base : friis, frequency, world);
    return std::make_unique<HybridBuildingsLoss>(std::move(base), world, lc.wall_losses);
  }
  throw SimError(Errc::build_error, "unknown propagation loss model '" + lc.type + "'");
}

std::unique_ptr<MobilityModel> make_mobility(const MobilityConfig& mc, Seconds horizon) {
  if (mc.type == "constantAcceleration") {
    return make_constant_acceleration_mobility(mc.plan, mc.acceleration, mc.max_speed,
                                               mc.curve_step);
  }
  if (mc.type == "parametricSpeed") {
    return make_parametric_speed_mobility(mc.plan, mc.coefficients, horizon, mc.curve_step);
  }
  return std::make_unique<ConstantPositionMobility>(mc.position);
}

std::unique_ptr<Application> make_app(const AppConfig& a, AppContext ctx) {
  if (a.type == "telemetryClient") {
    return std::make_unique<TelemetryClient>(
        ctx, TelemetryClient::Options{a.destination.value_or(kBroadcast), a.port, a.interval,
                                      a.free_data});
  }
  if (a.type == "telemetryServer") {
    return std::make_unique<TelemetryServer>(ctx, TelemetryServer::Options{a.port, a.store_data});
  }
  const TrafficOptions traffic{a.address, a.port, a.payload_size, a.frequency};
  if (a.type == "periodicClient") return std::make_unique<PeriodicClient>(ctx, traffic);
  if (a.type == "storageClient") return std::make_unique<StorageClient>(ctx, traffic);
  if (a.type == "udpEchoClient") return std::make_unique<UdpEchoClient>(ctx, traffic);
  if (a.type == "echoServer") {
    return std::make_unique<EchoServer>(ctx, EchoServer::Options{a.port, a.echo});
  }
  if (a.type == "nat") {
    return std::make_unique<NatApp>(ctx, NatApp::Options{a.internal_device, a.external_device});
  }
  throw SimError(Errc::build_error, "unknown application '" + a.type + "'");
}

// Rethrows any failure as BuildError prefixed with the element path.
template <class F>
void at_path(const std::string& path, F&& f) {
  try {
    f();
  } catch (const SimError& e) {
    if (e.code() == Errc::build_error) throw;
    throw SimError(Errc::build_error, path + ": " + e.what());
  }
}

}  // namespace

Simulation::Simulation(ScenarioConfig cfg, DebugLog* log)
    : cfg_(std::move(cfg)), log_(log), engine_(cfg_.seed) {
  build();
}

Simulation::~Simulation() = default;

void Simulation::debug(std::string_view component, const std::string& msg) {
  if (log_ != nullptr && log_->enabled(component)) log_->write(component, engine_.now(), msg);
}

void Simulation::build() {
  const auto& sc = cfg_.static_config;
  if (!(cfg_.duration > 0)) throw SimError(Errc::build_error, "/duration: must be > 0 s");
  steps_.push_back("static-config");

  for (std::size_t i = 0; i < cfg_.world.buildings.size(); ++i) {
    at_path(fmt::format("/world/buildings/{}", i),
            [&] { world_.add_building(cfg_.world.buildings[i]); });
  }
  for (const auto& r : cfg_.world.regions) world_.create_region(r);
  steps_.push_back("world");

  net_ = std::make_unique<Network>(
      engine_, [this](std::size_t n, Seconds t) { return nodes_[n]->position(t); },
      [this](std::size_t n, Seconds t) { return alive(n, t); });
  if (cfg_.phy.size() != cfg_.mac.size() || cfg_.phy.size() != cfg_.net.size()) {
    throw SimError(Errc::build_error, "/macLayer: layer arrays differ in length");
  }
  for (std::size_t i = 0; i < cfg_.phy.size(); ++i) {
    const auto& phy = cfg_.phy[i];
    Stack st;
    st.phy_type = phy.type;
    st.mac_type = cfg_.mac[i].type;
    st.radio = phy.radio;
    at_path(fmt::format("/phyLayer/{}/propagationLossModel", i),
            [&] { st.loss = make_loss(phy.loss, phy.radio.frequency_hz, world_); });
    st.fixed_rate_bps = phy.fixed_rate_bps;
    st.rate_table = sc.snr_table;
    st.probabilistic_loss = phy.probabilistic_loss;
    st.network = cfg_.net[i].address;
    st.mask = cfg_.net[i].mask;
    net_->add_stack(std::move(st));
  }
  steps_.push_back("layers");

  for (std::size_t i = 0; i < cfg_.drones.size(); ++i) {
    Drone& d = drones_.create();
    const auto& m = cfg_.drones[i].mechanics;
    at_path(fmt::format("/drones/{}/mechanics", i), [&] {
      d.mechanics() = Mechanics(m.mass, m.rotor_disk_area, m.drag_coefficient, m.air_density);
    });
    d.set_global_id(nodes_.size());
    nodes_.push_back(&d);
  }
  for (std::size_t i = 0; i < cfg_.zsps.size(); ++i) {
    Zsp& z = zsps_.create();
    z.set_global_id(nodes_.size());
    nodes_.push_back(&z);
  }
  for (std::size_t i = 0; i < cfg_.remotes.size(); ++i) {
    Remote& r = remotes_.create();
    r.set_global_id(nodes_.size());
    nodes_.push_back(&r);
  }
  for (const Node* n : nodes_) net_->add_node(n->kind());
  steps_.push_back("entities");

  auto add_devices = [&](const std::vector<NetDeviceConfig>& devs, const Node& n,
                         const std::string& path) {
    for (std::size_t k = 0; k < devs.size(); ++k) {
      if (devs[k].stack >= net_->stack_count()) {
        throw SimError(Errc::build_error,
                       fmt::format("{}/netDevices/{}: no such layer stack", path, k));
      }
      net_->add_radio_device(n.global_id(), devs[k].stack, devs[k].role, devs[k].energy);
    }
  };
  for (std::size_t i = 0; i < cfg_.drones.size(); ++i) {
    add_devices(cfg_.drones[i].net_devices, drones_.get(i), fmt::format("/drones/{}", i));
  }
  for (std::size_t i = 0; i < cfg_.zsps.size(); ++i) {
    add_devices(cfg_.zsps[i].net_devices, zsps_.get(i), fmt::format("/zsps/{}", i));
  }
  steps_.push_back("net-devices");

  for (std::size_t i = 0; i < cfg_.drones.size(); ++i) {
    at_path(fmt::format("/drones/{}/mobilityModel", i), [&] {
      drones_.get(i).set_mobility(make_mobility(cfg_.drones[i].mobility, cfg_.duration));
    });
  }
  for (std::size_t i = 0; i < cfg_.zsps.size(); ++i) {
    at_path(fmt::format("/zsps/{}/mobilityModel", i), [&] {
      zsps_.get(i).set_mobility(make_mobility(cfg_.zsps[i].mobility, cfg_.duration));
    });
  }
  steps_.push_back("mobility");

  const ReliableOptions reliable{sc.reliable_window, sc.mss, sc.retransmission_timeout,
                                 sc.connection_timeout};
  auto add_apps = [&](const std::vector<AppConfig>& apps, Node& n) {
    for (std::size_t k = 0; k < apps.size(); ++k) {
      AppContext ctx;
      ctx.engine = &engine_;
      ctx.net = net_.get();
      ctx.node = &n;
      ctx.node_id = n.global_id();
      ctx.app_id = static_cast<std::uint32_t>(k);
      ctx.start = apps[k].start;
      ctx.stop = apps[k].stop.value_or(cfg_.duration);
      ctx.reliable = reliable;
      apps_.push_back(make_app(apps[k], ctx));
    }
  };
  for (std::size_t i = 0; i < cfg_.drones.size(); ++i) add_apps(cfg_.drones[i].applications, drones_.get(i));
  for (std::size_t i = 0; i < cfg_.zsps.size(); ++i) add_apps(cfg_.zsps[i].applications, zsps_.get(i));
  for (std::size_t i = 0; i < cfg_.remotes.size(); ++i) {
    add_apps(cfg_.remotes[i].applications, remotes_.get(i));
  }
  steps_.push_back("applications");

  storage_samples_.resize(cfg_.drones.size());
  last_busy_.resize(cfg_.drones.size());
  for (std::size_t i = 0; i < cfg_.drones.size(); ++i) {
    Drone& d = drones_.get(i);
    const std::string path = fmt::format("/drones/{}/peripherals", i);
    for (std::size_t k = 0; k < cfg_.drones[i].peripherals.size(); ++k) {
      const auto& pc = cfg_.drones[i].peripherals[k];
      at_path(fmt::format("{}/{}", path, k), [&] {
        std::unique_ptr<Peripheral> p;
        if (pc.type == "storage") {
          p = std::make_unique<StoragePeripheral>(pc.power, pc.capacity, pc.initial_remaining);
        } else if (pc.type == "input") {
          p = std::make_unique<InputPeripheral>(pc.power, pc.data_rate, pc.interval,
                                                pc.has_storage);
        } else {
          p = std::make_unique<Peripheral>(pc.type, pc.power);
        }
        for (auto id : pc.roi_trigger) {
          if (id >= world_.region_count()) {
            throw SimError(Errc::unknown_region, fmt::format("region {} does not exist", id));
          }
        }
        p->set_roi_trigger(pc.roi_trigger);
        d.add_peripheral(std::move(p));
      });
    }
    for (const auto& p : d.peripherals()) {
      if (auto* in = dynamic_cast<InputPeripheral*>(p.get()); in && in->has_storage()) {
        if (d.storage() == nullptr) {
          throw SimError(Errc::build_error, path + ": HasStorage without a storage peripheral");
        }
        in->attach_storage(d.storage());
      }
    }
    if (StoragePeripheral* s = d.storage()) {
      storage_samples_[i].push_back({0.0, s->occupied()});
      s->on_change([this, i, s] {
        auto& v = storage_samples_[i];
        const Seconds now = engine_.now();
        if (!v.empty() && v.back().time == now) {
          v.back().occupied = s->occupied();
        } else {
          v.push_back({now, s->occupied()});
        }
      });
    }
    const auto& b = cfg_.drones[i].battery;
    std::unique_ptr<EnergyModel> em;
    at_path(fmt::format("/drones/{}/battery", i), [&] {
      em = std::make_unique<EnergyModel>(
          engine_, EnergySource(b.joules, b.sampling_interval),
          [this, i](Seconds t) { return drone_power(i, t); },
          [this, i](Seconds t) { on_depleted(i, t); });
    });
    energy_.push_back(std::move(em));
  }
  steps_.push_back("peripherals-energy");

  for (const auto& r : remotes_) net_->attach_to_bus(r->global_id());
  for (const auto& z : zsps_) {
    bool gateway = false;
    for (auto dev : net_->node_devices(z->global_id())) {
      gateway = gateway || net_->device(dev).role == DeviceRole::access;
    }
    if (gateway) net_->attach_to_bus(z->global_id());
  }
  net_->set_bus(BusConfig{sc.backbone_data_rate, sc.backbone_delay});
  at_path("/networkLayer", [&] { net_->finalize(); });
  steps_.push_back("backbone");

  for (std::size_t k = 0; k < apps_.size(); ++k) {
    at_path(fmt::format("application {} on node {}", apps_[k]->id(), apps_[k]->node_id()),
            [&] { apps_[k]->install(); });
  }
  for (std::size_t i = 0; i < drones_.size(); ++i) {
    schedule_mobility_tick(i, 0);
    energy_[i]->start();
    for (const auto& p : drones_.get(i).peripherals()) {
      if (auto* in = dynamic_cast<InputPeripheral*>(p.get())) schedule_acquisition(i, in, 1);
    }
  }
  steps_.push_back("schedule");
  for (const auto& s : steps_) debug("config", "build step " + s);
}

void Simulation::schedule_mobility_tick(std::size_t drone, std::uint64_t k) {
  const Seconds dt = cfg_.static_config.mobility_update_interval;
  const Seconds at = static_cast<double>(k) * dt;
  if (at > cfg_.duration + kTimeResolution) return;
  engine_.schedule(std::max(0.0, at - engine_.now()), [this, drone, k] {
    Drone& d = drones_.get(drone);
    if (d.alive()) {
      const Vec3 pos = d.position(engine_.now());
      for (const auto& p : d.peripherals()) {
        if (p->roi_trigger().empty()) continue;
        const auto before = p->state();
        p->update_roi(world_.is_in_regions(pos, p->roi_trigger()));
        if (p->state() != before) {
          debug("peripherals", fmt::format("drone {} {} {} -> {}", drone, p->kind(),
                                           to_string(before), to_string(p->state())));
        }
      }
    }
    net_->update_attachments(d.global_id());
    schedule_mobility_tick(drone, k + 1);
  });
}

void Simulation::schedule_acquisition(std::size_t drone, InputPeripheral* p, std::uint64_t k) {
  const Seconds at = static_cast<double>(k) * p->interval();
  if (at > cfg_.duration + kTimeResolution) return;
  engine_.schedule(std::max(0.0, at - engine_.now()), [this, drone, p, k] {
    if (!drones_.get(drone).alive()) return;
    p->acquire_tick();
    schedule_acquisition(drone, p, k + 1);
  });
}

PowerBreakdown Simulation::drone_power(std::size_t drone, Seconds t) {
  const Drone& d = drones_.get(drone);
  const Vec3 v = d.mobility() ? d.mobility()->state_at(t).velocity : Vec3{};
  PowerBreakdown pb = mechanical_power(v, d.mechanics());
  for (const auto& p : d.peripherals()) pb.peripherals += p->power();

  const Seconds dt = energy_.at(drone)->source().sampling_interval();
  double tx = 0.0, rx = 0.0;
  for (auto id : net_->node_devices(d.global_id())) {
    const auto& dev = net_->device(id);
    pb.radio += dev.energy.idle_w;
    tx += dev.energy.tx_w > 0 ? dev.tx_busy * dev.energy.tx_w : 0.0;
    rx += dev.energy.rx_w > 0 ? dev.rx_busy * dev.energy.rx_w : 0.0;
  }
  // Busy time is cumulative; the share spent in this interval becomes power.
  auto& last = last_busy_[drone];
  pb.radio += (tx - last.tx) / dt + (rx - last.rx) / dt;
  last = {tx, rx};
  pb.total = pb.mechanical() + pb.peripherals + pb.radio;
  return pb;
}

void Simulation::on_depleted(std::size_t drone, Seconds t) {
  Drone& d = drones_.get(drone);
  d.mark_depleted(t);
  if (d.mobility()) d.mobility()->freeze(t);
  for (const auto& p : d.peripherals()) p->force_off();
  debug("energy", fmt::format("drone {} depleted at {:.6f} s", drone, t));
}

bool Simulation::alive(std::size_t global_id, Seconds t) const {
  const auto dep = nodes_.at(global_id)->depleted_at();
  return !dep || t < *dep;
}

const RunStats& Simulation::run() {
  stats_ = engine_.run(cfg_.duration);
  if (log_ != nullptr) log_->flush();
  return *stats_;
}

std::vector<const Application*> Simulation::applications_of(std::size_t global_id) const {
  std::vector<const Application*> out;
  for (const auto& a : apps_) {
    if (a->node_id() == global_id) out.push_back(a.get());
  }
  return out;
}

std::vector<TrajectoryPoint> Simulation::trajectory(std::size_t drone) const {
  const Drone& d = drones_.get(drone);
  const Seconds step = cfg_.static_config.trajectory_sampling_interval;
  const Seconds end = stats_ ? stats_->virtual_seconds : cfg_.duration;
  std::vector<TrajectoryPoint> out;
  for (std::uint64_t k = 0;; ++k) {
    const Seconds t = static_cast<double>(k) * step;
    if (t > end + kTimeResolution) break;
    out.push_back({t, d.position(t)});
  }
  if (out.empty() || out.back().time < end - kTimeResolution) out.push_back({end, d.position(end)});
  return out;
}

}  // namespace iodsim
