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
#include "iodsim/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "iodsim/error.hpp"

namespace iodsim {

namespace {

// Coincident antennas would make every loss model singular.
constexpr double kMinSeparation = 0.01;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::optional<Ipv4> parse_ipv4(std::string_view text) {
  Ipv4 out = 0;
  for (int part = 0; part < 4; ++part) {
    unsigned v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first || v > 255 || ptr - first > 3) return std::nullopt;
    out = (out << 8) | v;
    text.remove_prefix(static_cast<std::size_t>(ptr - first));
    if (part < 3) {
      if (text.empty() || text.front() != '.') return std::nullopt;
      text.remove_prefix(1);
    }
  }
  if (!text.empty()) return std::nullopt;
  return out;
}

std::string format_ipv4(Ipv4 a) {
  return fmt::format("{}.{}.{}.{}", a >> 24, (a >> 16) & 0xFF, (a >> 8) & 0xFF, a & 0xFF);
}

std::string_view to_string(Proto p) { return p == Proto::tcp ? "tcp" : "udp"; }

std::string payload_text(const std::vector<std::uint8_t>& payload) {
  const bool printable = std::all_of(payload.begin(), payload.end(),
                                     [](std::uint8_t c) { return c >= 0x20 && c < 0x7F; });
  if (printable) return std::string(payload.begin(), payload.end());
  std::string out = fmt::format("[{} bytes]", payload.size());
  const std::size_t n = std::min<std::size_t>(payload.size(), 16);
  if (n > 0) out += ' ';
  for (std::size_t i = 0; i < n; ++i) out += fmt::format("{:02x}", payload[i]);
  return out;
}

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::sensitivity_floor:
      return "SensitivityFloor";
    case DropReason::rate_zero:
      return "RateZero";
    case DropReason::sender_depleted:
      return "SenderDepleted";
    case DropReason::receiver_down:
      return "ReceiverDown";
    case DropReason::no_route:
      return "NoRoute";
    case DropReason::no_listener:
      return "NoListener";
    case DropReason::random_loss:
      return "RandomLoss";
  }
  return "?";
}

std::string_view to_string(DeviceRole r) {
  switch (r) {
    case DeviceRole::access:
      return "access";
    case DeviceRole::station:
      return "station";
    case DeviceRole::bus:
      return "bus";
  }
  return "?";
}

std::uint64_t LinkStats::total_dropped() const {
  std::uint64_t n = 0;
  for (auto d : dropped) n += d;
  return n;
}

Network::Network(Engine& engine, PositionFn position, AliveFn alive)
    : engine_(engine), position_(std::move(position)), alive_(std::move(alive)) {}

std::size_t Network::add_stack(Stack stack) {
  stacks_.push_back(std::move(stack));
  return stacks_.size() - 1;
}

std::size_t Network::add_node(EntityKind kind) {
  nodes_.push_back(NodeInfo{kind, {}, {}, kFirstEphemeralPort, {}, {}, kind == EntityKind::zsp});
  return nodes_.size() - 1;
}

std::size_t Network::add_radio_device(std::size_t node, std::size_t stack, DeviceRole role,
                                      RadioEnergy energy) {
  if (node >= nodes_.size()) throw SimError(Errc::unknown_entity, "unknown node");
  if (stack >= stacks_.size()) throw SimError(Errc::build_error, "unknown stack index");
  NetDevice d;
  d.id = devices_.size();
  d.node = node;
  d.local = nodes_[node].devices.size() + 1;
  d.stack = stack;
  d.role = role;
  d.energy = energy;
  d.layer = stacks_[stack].phy_type;
  devices_.push_back(std::move(d));
  nodes_[node].devices.push_back(devices_.back().id);
  return devices_.back().id;
}

std::size_t Network::attach_to_bus(std::size_t node) {
  if (node >= nodes_.size()) throw SimError(Errc::unknown_entity, "unknown node");
  if (auto existing = bus_device(node)) return *existing;
  NetDevice d;
  d.id = devices_.size();
  d.node = node;
  d.local = nodes_[node].devices.size() + 1;
  d.role = DeviceRole::bus;
  d.layer = "internet";
  std::size_t attached = 0;
  for (const auto& other : devices_) attached += other.role == DeviceRole::bus ? 1 : 0;
  d.address = kBusNetwork + static_cast<Ipv4>(attached + 1);
  devices_.push_back(std::move(d));
  nodes_[node].devices.push_back(devices_.back().id);
  return devices_.back().id;
}

void Network::finalize() {
  for (std::size_t s = 0; s < stacks_.size(); ++s) {
    Ipv4 host = 1;
    for (DeviceRole role : {DeviceRole::access, DeviceRole::station}) {
      for (auto& d : devices_) {
        if (d.stack != s || d.role != role) continue;
        if ((host & stacks_[s].mask) != 0) {
          throw SimError(Errc::build_error,
                         fmt::format("network {} has no room for more devices",
                                     format_ipv4(stacks_[s].network)));
        }
        d.address = (stacks_[s].network & stacks_[s].mask) | host++;
      }
    }
  }
  by_address_.clear();
  for (const auto& d : devices_) {
    if (!by_address_.emplace(d.address, d.id).second) {
      throw SimError(Errc::build_error,
                     "duplicate address " + format_ipv4(d.address) + " across stacks");
    }
  }
  finalized_ = true;
  for (const auto& d : devices_) {
    if (d.role == DeviceRole::station) refresh(d.id);
  }
}

const std::vector<std::size_t>& Network::node_devices(std::size_t node) const {
  return nodes_.at(node).devices;
}

std::optional<std::size_t> Network::device_by_address(Ipv4 a) const {
  auto it = by_address_.find(a);
  if (it == by_address_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Network::bus_device(std::size_t node) const {
  for (auto id : nodes_.at(node).devices) {
    if (devices_[id].role == DeviceRole::bus) return id;
  }
  return std::nullopt;
}

std::uint16_t Network::bind(std::size_t node, Proto proto, std::uint16_t port, Receiver rx) {
  if (port == 0) port = next_ephemeral(node);
  nodes_.at(node).sockets[{proto, port}] = std::move(rx);
  return port;
}

std::uint16_t Network::next_ephemeral(std::size_t node) {
  auto& n = nodes_.at(node);
  while (n.sockets.count({Proto::udp, n.next_port}) || n.sockets.count({Proto::tcp, n.next_port})) {
    ++n.next_port;
  }
  return n.next_port++;
}

bool Network::bound(std::size_t node, Proto proto, std::uint16_t port) const {
  return nodes_.at(node).sockets.count({proto, port}) > 0;
}

void Network::set_transit_hook(std::size_t node, Hook h) { nodes_.at(node).transit = std::move(h); }
void Network::set_unbound_hook(std::size_t node, Hook h) { nodes_.at(node).unbound = std::move(h); }
void Network::set_forwarding(std::size_t node, bool on) { nodes_.at(node).forwarding = on; }

Ipv4 Network::primary_address(std::size_t node) const {
  const auto& devs = nodes_.at(node).devices;
  return devs.empty() ? 0 : devices_[devs.front()].address;
}

bool Network::owns(std::size_t node, Ipv4 a) const {
  for (auto id : nodes_[node].devices) {
    if (devices_[id].address == a) return true;
  }
  return false;
}

void Network::send(std::size_t node, Packet p) {
  if (p.uid == 0) p.uid = next_uid_++;
  route(node, std::make_shared<const Packet>(std::move(p)));
}

void Network::route(std::size_t node, const PacketPtr& in) {
  auto with_src = [&](std::size_t dev) -> PacketPtr {
    if (in->src != 0) return in;
    auto copy = std::make_shared<Packet>(*in);
    copy->src = devices_[dev].address;
    return copy;
  };
  const auto& info = nodes_[node];

  if (in->dst == kBroadcast) {
    bool any = false;
    for (auto d : info.devices) {
      if (!devices_[d].stack) continue;
      auto p = with_src(d);
      for (const auto& e : devices_) {
        if (e.stack == devices_[d].stack && e.node != node) {
          radio_tx(d, e.id, p);
          any = true;
        }
      }
    }
    if (!any) drop(DropReason::no_route);
    return;
  }

  if (owns(node, in->dst)) {
    const auto dev = *device_by_address(in->dst);
    auto p = with_src(dev);
    engine_.schedule(0.0, [this, dev, p] { receive(dev, p); });
    return;
  }

  const auto target = device_by_address(in->dst);
  if (target) {
    const auto& t = devices_[*target];
    // Same radio network.
    for (auto d : info.devices) {
      const auto& dev = devices_[d];
      if (!dev.stack || dev.stack != t.stack) continue;
      if (dev.role == DeviceRole::access || t.role == DeviceRole::access) {
        radio_tx(d, t.id, with_src(d));
      } else if (dev.serving) {
        radio_tx(d, *dev.serving, with_src(d));
      } else {
        drop(DropReason::no_route);
      }
      return;
    }
    if (auto bus = bus_device(node)) {
      if (t.role == DeviceRole::bus) {
        bus_tx(*bus, t.id, with_src(*bus));
        return;
      }
      const auto gateway_dev = t.role == DeviceRole::access ? std::optional{t.id} : t.serving;
      if (gateway_dev) {
        if (auto gw_bus = bus_device(devices_[*gateway_dev].node);
            gw_bus && devices_[*gateway_dev].node != node) {
          bus_tx(*bus, *gw_bus, with_src(*bus));
          return;
        }
      }
    }
  }

  // Default route: uplink through the serving access device.
  for (auto d : info.devices) {
    const auto& dev = devices_[d];
    if (dev.role == DeviceRole::station && dev.serving) {
      radio_tx(d, *dev.serving, with_src(d));
      return;
    }
  }
  drop(DropReason::no_route);
}

void Network::drop(DropReason r, std::optional<std::pair<std::size_t, std::size_t>> link) {
  ++drops_[static_cast<std::size_t>(r)];
  if (link) ++link_stats_[*link].dropped[static_cast<std::size_t>(r)];
}

double Network::rx_power_between(std::size_t from_dev, std::size_t to_dev, Seconds t) const {
  const auto& a = devices_.at(from_dev);
  const auto& b = devices_.at(to_dev);
  const auto& s = stacks_.at(*a.stack);
  const Vec3 pa = position_(a.node, t);
  Vec3 pb = position_(b.node, t);
  if (distance(pa, pb) < kMinSeparation) pb = pa + Vec3{0.0, 0.0, kMinSeparation};
  return rx_power(s.radio, s.loss->loss(pa, pb));
}

void Network::radio_tx(std::size_t from, std::size_t to, const PacketPtr& p) {
  const Seconds now = engine_.now();
  const auto link = std::make_pair(from, to);
  auto& stats = link_stats_[link];
  auto& src = devices_[from];
  ++stats.sent;
  if (!alive_(src.node, now)) {
    drop(DropReason::sender_depleted, link);
    return;
  }
  const auto& s = stacks_[*src.stack];
  const double rx = rx_power_between(from, to, now);
  const double link_snr = snr(rx, s.radio.noise_floor_dbm);

  src.records.push_back({now, true, p, std::nullopt});
  if (rx < s.radio.rx_sensitivity_dbm) {
    drop(DropReason::sensitivity_floor, link);
    return;
  }
  const double rate = s.fixed_rate_bps ? *s.fixed_rate_bps : select_rate(link_snr, s.rate_table);
  if (!(rate > 0.0)) {
    drop(DropReason::rate_zero, link);
    return;
  }
  if (s.probabilistic_loss) {
    // Logistic packet error rate centred on the sensitivity SNR.
    const double margin = link_snr - snr(s.radio.rx_sensitivity_dbm, s.radio.noise_floor_dbm);
    const double per = 1.0 / (1.0 + std::exp(margin));
    if (uniform01(engine_.rng()) < per) {
      drop(DropReason::random_loss, link);
      return;
    }
  }

  Seconds& busy = link_busy_[link];
  const Seconds start = std::max(now, busy);
  const Seconds serialization = static_cast<double>(p->size()) * 8.0 / rate;
  busy = start + serialization;
  src.tx_busy += serialization;
  src.records.back().time = start;
  const Seconds propagation =
      distance(position_(src.node, now), position_(devices_[to].node, now)) / kSpeedOfLight;
  const Seconds arrival = busy + propagation;

  engine_.schedule(arrival - now, [this, from, to, p, rx, serialization, link] {
    const Seconds t = engine_.now();
    if (!alive_(devices_[from].node, t)) {
      drop(DropReason::sender_depleted, link);
      return;
    }
    if (!alive_(devices_[to].node, t)) {
      drop(DropReason::receiver_down, link);
      return;
    }
    ++link_stats_[link].delivered;
    auto& dst = devices_[to];
    dst.rx_busy += serialization;
    dst.records.push_back({t, false, p, rx});
    receive(to, p);
  });
}

void Network::bus_tx(std::size_t from, std::size_t to, const PacketPtr& p) {
  const Seconds now = engine_.now();
  const auto link = std::make_pair(from, to);
  ++link_stats_[link].sent;
  if (!alive_(devices_[from].node, now)) {
    drop(DropReason::sender_depleted, link);
    return;
  }
  const Seconds start = std::max(now, bus_busy_);
  const Seconds serialization = static_cast<double>(p->size()) * 8.0 / bus_.rate_bps;
  bus_busy_ = start + serialization;
  devices_[from].records.push_back({start, true, p, std::nullopt});
  engine_.schedule(bus_busy_ + bus_.delay - now, [this, from, to, p, link] {
    const Seconds t = engine_.now();
    if (!alive_(devices_[to].node, t)) {
      drop(DropReason::receiver_down, link);
      return;
    }
    ++link_stats_[link].delivered;
    devices_[to].records.push_back({t, false, p, std::nullopt});
    receive(to, p);
  });
}

void Network::backbone_deliver(std::size_t from_node, std::size_t to_node, Packet p) {
  const auto a = bus_device(from_node);
  const auto b = bus_device(to_node);
  if (!a || !b) throw SimError(Errc::not_on_bus, "both endpoints must be attached to the bus");
  if (p.uid == 0) p.uid = next_uid_++;
  if (p.src == 0) p.src = devices_[*a].address;
  if (p.dst == 0) p.dst = devices_[*b].address;
  bus_tx(*a, *b, std::make_shared<const Packet>(std::move(p)));
}

void Network::receive(std::size_t device, const PacketPtr& p) {
  const std::size_t node = devices_[device].node;
  auto& info = nodes_[node];
  if (p->dst == kBroadcast || owns(node, p->dst)) {
    auto it = info.sockets.find({p->proto, p->dport});
    if (it != info.sockets.end()) {
      it->second(*p, device);
      return;
    }
    if (p->dst != kBroadcast && info.unbound && info.unbound(*p, device)) return;
    drop(DropReason::no_listener);
    return;
  }
  if (info.transit && info.transit(*p, device)) return;
  if (info.forwarding) {
    route(node, p);
    return;
  }
  drop(DropReason::no_route);
}

std::optional<std::size_t> Network::best_access(std::size_t station) const {
  const auto& st = devices_[station];
  const Seconds now = engine_.now();
  std::optional<std::size_t> best;
  double best_rx = -INFINITY;
  for (const auto& d : devices_) {
    if (d.role != DeviceRole::access || d.stack != st.stack || d.node == st.node) continue;
    if (!alive_(d.node, now)) continue;
    const double rx = rx_power_between(d.id, station, now);
    if (!best || rx > best_rx) {
      best = d.id;
      best_rx = rx;
    }
  }
  return best;
}

void Network::refresh(std::size_t station) {
  auto best = best_access(station);
  auto& st = devices_[station];
  if (best != st.serving || st.attachments.empty()) {
    st.serving = best;
    st.attachments.push_back({engine_.now(), best});
  }
}

void Network::update_attachments(std::size_t node) {
  if (!finalized_) return;
  std::vector<std::size_t> stacks;
  for (auto id : nodes_.at(node).devices) {
    const auto& d = devices_[id];
    if (!d.stack) continue;
    if (d.role == DeviceRole::station) {
      refresh(id);
    } else {
      stacks.push_back(*d.stack);
    }
  }
  if (stacks.empty()) return;
  for (const auto& d : devices_) {
    if (d.role != DeviceRole::station || d.node == node || !d.stack) continue;
    if (std::find(stacks.begin(), stacks.end(), *d.stack) != stacks.end()) refresh(d.id);
  }
}

}  // namespace iodsim
