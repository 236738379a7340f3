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
#include "iodsim/apps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "iodsim/error.hpp"

namespace iodsim {

namespace {

using ojson = nlohmann::ordered_json;

bool known_cmd(std::string_view c) {
  return c == "HELLO" || c == "HELLO_ACK" || c == "UPDATE" || c == "UPDATE_ACK";
}

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

// ---- telemetry payload ---------------------------------------------------------

std::string serialize(const TelemetryPayload& p) {
  ojson j;
  j["id"] = p.id;
  j["sn"] = p.sn;
  j["cmd"] = p.cmd;
  j["gps"] = ojson{{"lat", p.lat}, {"lon", p.lon}, {"alt", p.alt}};
  j["vel"] = ojson::array({p.vel[0], p.vel[1], p.vel[2]});
  return j.dump();
}

std::optional<TelemetryPayload> parse_telemetry(std::string_view text) {
  const auto j = nlohmann::json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.size() != 5) return std::nullopt;
  auto u32 = [](const nlohmann::json& v) -> std::optional<std::uint32_t> {
    if (!v.is_number_unsigned()) return std::nullopt;
    const auto x = v.get<std::uint64_t>();
    if (x > std::numeric_limits<std::uint32_t>::max()) return std::nullopt;
    return static_cast<std::uint32_t>(x);
  };
  if (!j.contains("id") || !j.contains("sn") || !j.contains("cmd") || !j.contains("gps") ||
      !j.contains("vel")) {
    return std::nullopt;
  }
  TelemetryPayload p;
  const auto id = u32(j["id"]);
  const auto sn = u32(j["sn"]);
  if (!id || !sn || !j["cmd"].is_string()) return std::nullopt;
  p.id = *id;
  p.sn = *sn;
  p.cmd = j["cmd"].get<std::string>();
  if (!known_cmd(p.cmd)) return std::nullopt;

  const auto& gps = j["gps"];
  if (!gps.is_object() || gps.size() != 3) return std::nullopt;
  for (const char* k : {"lat", "lon", "alt"}) {
    if (!gps.contains(k) || !gps[k].is_number()) return std::nullopt;
  }
  p.lat = gps["lat"].get<double>();
  p.lon = gps["lon"].get<double>();
  p.alt = gps["alt"].get<double>();

  const auto& vel = j["vel"];
  if (!vel.is_array() || vel.size() != 3) return std::nullopt;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!vel[i].is_number_integer()) return std::nullopt;
    p.vel[i] = vel[i].get<std::int64_t>();
  }
  return p;
}

std::string_view to_string(TelemetryState s) {
  switch (s) {
    case TelemetryState::fresh:
      return "NEW";
    case TelemetryState::hello_sent:
      return "HELLO_SENT";
    case TelemetryState::connected:
      return "CONNECTED";
  }
  return "?";
}

TelemetryFsm::Send TelemetryFsm::on_tick() {
  if (state_ == TelemetryState::connected) return Send::update;
  state_ = TelemetryState::hello_sent;
  return Send::hello;
}

bool TelemetryFsm::on_hello_ack() {
  if (state_ != TelemetryState::hello_sent) return false;
  state_ = TelemetryState::connected;
  return true;
}

// ---- PDU ------------------------------------------------------------------------

std::vector<std::uint8_t> make_pdu(std::uint32_t sn, Seconds created, std::size_t payload,
                                   std::uint16_t& counter) {
  std::vector<std::uint8_t> out;
  out.reserve(kPduHeaderBytes + payload);
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(sn >> s));
  const auto ns = static_cast<std::uint64_t>(std::llround(created * 1e9));
  for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(ns >> s));
  for (std::size_t i = 0; i < payload; i += 2) {
    const std::uint16_t w = counter++;
    out.push_back(static_cast<std::uint8_t>(w >> 8));
    if (i + 1 < payload) out.push_back(static_cast<std::uint8_t>(w & 0xFF));
  }
  return out;
}

std::optional<PduHeader> parse_pdu(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPduHeaderBytes) return std::nullopt;
  PduHeader h;
  for (int i = 0; i < 4; ++i) h.sn = (h.sn << 8) | bytes[i];
  std::uint64_t ns = 0;
  for (int i = 4; i < 12; ++i) ns = (ns << 8) | bytes[i];
  h.created = static_cast<double>(ns) * 1e-9;
  return h;
}

// ---- NAT --------------------------------------------------------------------------

NatTable::NatTable(std::uint16_t first_port, std::size_t pool)
    : first_(first_port), pool_(std::min<std::size_t>(pool, 65536u - first_port)) {}

std::uint16_t NatTable::outbound(Ipv4 addr, std::uint16_t port) {
  const auto key = std::make_pair(addr, port);
  if (auto it = by_flow_.find(key); it != by_flow_.end()) return it->second;
  if (by_port_.size() >= pool_) {
    throw SimError(Errc::port_exhaustion, "all NAT external ports are allocated");
  }
  const auto ext = static_cast<std::uint16_t>(first_ + by_port_.size());
  by_flow_.emplace(key, ext);
  by_port_.emplace(ext, key);
  return ext;
}

std::optional<std::pair<Ipv4, std::uint16_t>> NatTable::inbound(std::uint16_t external) const {
  auto it = by_port_.find(external);
  if (it == by_port_.end()) return std::nullopt;
  return it->second;
}

// ---- application base ----------------------------------------------------------------

bool Application::active() const {
  return node().alive() && engine().now() <= ctx_.stop + kTimeResolution;
}

void Application::record(AppEvent e) { log_.push_back(std::move(e)); }

void Application::every(Seconds interval, std::function<void()> fn) {
  auto shared = std::make_shared<std::function<void()>>(std::move(fn));
  if (ctx_.start > ctx_.stop) return;
  engine().schedule(std::max(0.0, ctx_.start - engine().now()),
                    [this, interval, shared] { tick(interval, 0, shared); });
}

void Application::tick(Seconds interval, std::uint64_t k,
                       std::shared_ptr<std::function<void()>> fn) {
  if (!active()) return;
  (*fn)();
  const Seconds next = ctx_.start + static_cast<double>(k + 1) * interval;
  if (next > ctx_.stop + kTimeResolution) return;
  engine().schedule(std::max(0.0, next - engine().now()),
                    [this, interval, k, fn] { tick(interval, k + 1, fn); });
}

// ---- telemetry --------------------------------------------------------------------------

void TelemetryClient::install() {
  port_ = net().bind(ctx_.node_id, Proto::udp, 0,
                     [this](const Packet& p, std::size_t) { on_packet(p); });
  every(opt_.interval, [this] { on_tick(); });
}

void TelemetryClient::on_tick() {
  const auto kind = fsm_.on_tick();
  const auto st = node().mobility() ? node().mobility()->state_at(engine().now())
                                    : MobilityState{};
  TelemetryPayload pl;
  pl.id = static_cast<std::uint32_t>(ctx_.node_id);
  pl.sn = sn_++;
  pl.cmd = kind == TelemetryFsm::Send::hello ? "HELLO" : "UPDATE";
  pl.lat = st.position.x;
  pl.lon = st.position.y;
  pl.alt = st.position.z;
  pl.vel = {std::llround(st.velocity.x), std::llround(st.velocity.y),
            std::llround(st.velocity.z)};

  Packet p;
  p.proto = Proto::udp;
  p.dst = kind == TelemetryFsm::Send::hello ? opt_.destination : server_;
  p.sport = port_;
  p.dport = kind == TelemetryFsm::Send::hello ? opt_.port : server_port_;
  p.payload = bytes_of(serialize(pl));
  p.created_at = engine().now();
  p.origin = ctx_.node_id;
  p.app = ctx_.app_id;
  const std::size_t n = p.payload.size();
  record({engine().now(), "tx", pl.sn, n, std::nullopt, std::nullopt, std::nullopt, pl.cmd});
  net().send(ctx_.node_id, std::move(p));

  if (kind == TelemetryFsm::Send::update && opt_.free_data) {
    if (auto* d = dynamic_cast<Drone*>(&node()); d && d->storage()) d->storage()->free(n * 8);
  }
}

void TelemetryClient::on_packet(const Packet& p) {
  if (!node().alive()) return;
  const auto pl = parse_telemetry({reinterpret_cast<const char*>(p.payload.data()),
                                   p.payload.size()});
  if (!pl) return;
  record({engine().now(), "rx", pl->sn, p.payload.size(), p.origin, p.app, p.created_at,
          pl->cmd});
  if (pl->cmd == "HELLO_ACK" && fsm_.on_hello_ack()) {
    server_ = p.src;
    server_port_ = p.sport;
    record({engine().now(), "connected", pl->sn, 0, p.origin, p.app, std::nullopt, ""});
  } else if (pl->cmd == "UPDATE_ACK") {
    fsm_.on_update_ack();
  }
}

void TelemetryServer::install() {
  net().bind(ctx_.node_id, Proto::udp, opt_.port,
             [this](const Packet& p, std::size_t) { on_packet(p); });
}

void TelemetryServer::on_packet(const Packet& p) {
  if (!active()) return;
  const auto pl = parse_telemetry({reinterpret_cast<const char*>(p.payload.data()),
                                   p.payload.size()});
  if (!pl) {
    ++malformed_;
    record({engine().now(), "malformed", 0, p.payload.size(), p.origin, p.app, std::nullopt,
            ""});
    return;
  }
  record({engine().now(), "rx", pl->sn, p.payload.size(), p.origin, p.app, p.created_at,
          pl->cmd});
  if (opt_.store_data) {
    if (auto* d = dynamic_cast<Drone*>(&node()); d && d->storage()) {
      d->storage()->alloc(p.payload.size() * 8);
    }
  }
  std::string reply;
  if (pl->cmd == "HELLO") {
    reply = "HELLO_ACK";
  } else if (pl->cmd == "UPDATE") {
    reply = "UPDATE_ACK";
  } else {
    return;
  }
  const Vec3 pos = node().position(engine().now());
  TelemetryPayload ack{static_cast<std::uint32_t>(ctx_.node_id), pl->sn, reply, pos.x, pos.y,
                       pos.z, {0, 0, 0}};
  Packet out;
  out.proto = Proto::udp;
  out.dst = p.src;
  out.sport = opt_.port;
  out.dport = p.sport;
  out.payload = bytes_of(serialize(ack));
  out.created_at = engine().now();
  out.origin = ctx_.node_id;
  out.app = ctx_.app_id;
  record({engine().now(), "tx", ack.sn, out.payload.size(), p.origin, p.app, std::nullopt,
          reply});
  net().send(ctx_.node_id, std::move(out));
}

// ---- generic traffic ----------------------------------------------------------------------

void PeriodicClient::install() {
  sender_ = std::make_unique<ReliableSender>(engine(), net(), ctx_.node_id, opt_.address,
                                             opt_.port, ctx_.reliable);
  sender_->set_origin_app(ctx_.app_id);
  sender_->on_acked([this](std::uint64_t id) {
    const auto sn = sn_of_[id];
    sn_of_.erase(id);
    record({engine().now(), "ack", sn, 0, std::nullopt, std::nullopt, std::nullopt, ""});
  });
  sender_->on_lost([this](const std::vector<std::uint64_t>& ids) {
    for (auto id : ids) {
      record({engine().now(), "lost", sn_of_[id], 0, std::nullopt, std::nullopt, std::nullopt,
              "ConnectionLost"});
      sn_of_.erase(id);
    }
  });
  every(1.0 / opt_.frequency, [this] {
    auto pdu = make_pdu(sn_, engine().now(), opt_.payload_size, pattern_);
    const std::size_t n = pdu.size();
    const auto id = sender_->send(std::move(pdu));
    sn_of_[id] = sn_;
    record({engine().now(), "tx", sn_, n, std::nullopt, std::nullopt, engine().now(), ""});
    ++sn_;
  });
}

void StorageClient::install() {
  auto* drone = dynamic_cast<Drone*>(&node());
  if (drone == nullptr || drone->storage() == nullptr) {
    throw SimError(Errc::build_error, "storageClient requires a drone with a storage peripheral");
  }
  storage_ = drone->storage();
  sender_ = std::make_unique<ReliableSender>(engine(), net(), ctx_.node_id, opt_.address,
                                             opt_.port, ctx_.reliable);
  sender_->set_origin_app(ctx_.app_id);
  sender_->on_acked([this](std::uint64_t id) {
    const auto [sn, bits] = in_flight_.at(id);
    in_flight_.erase(id);
    in_flight_bits_ -= bits;
    acked_bits_ += bits;
    record({engine().now(), "ack", sn, static_cast<std::size_t>(bits), std::nullopt,
            std::nullopt, std::nullopt, ""});
    storage_->free(bits);
    try_send();
  });
  sender_->on_lost([this](const std::vector<std::uint64_t>& ids) {
    for (auto id : ids) {
      const auto [sn, bits] = in_flight_.at(id);
      in_flight_.erase(id);
      in_flight_bits_ -= bits;
      record({engine().now(), "lost", sn, static_cast<std::size_t>(bits), std::nullopt,
              std::nullopt, std::nullopt, "ConnectionLost"});
    }
    try_send();
  });
  storage_->on_change([this] {
    if (pending_ || !started_) return;
    pending_ = true;
    engine().schedule(0.0, [this] {
      pending_ = false;
      try_send();
    });
  });
  engine().schedule(std::max(0.0, ctx_.start - engine().now()), [this] {
    started_ = true;
    try_send();
  });
}

void StorageClient::try_send() {
  if (!started_ || !active()) return;
  const std::size_t max_bits = opt_.payload_size * 8;
  while (sender_->unacked_messages() < ctx_.reliable.window) {
    const std::uint64_t occupied = storage_->occupied();
    if (occupied <= in_flight_bits_) break;
    const std::uint64_t chunk = std::min<std::uint64_t>(occupied - in_flight_bits_, max_bits);
    const std::size_t bytes = static_cast<std::size_t>((chunk + 7) / 8);
    auto pdu = make_pdu(sn_, engine().now(), bytes, pattern_);
    const std::size_t n = pdu.size();
    const auto id = sender_->send(std::move(pdu));
    in_flight_[id] = {sn_, chunk};
    in_flight_bits_ += chunk;
    record({engine().now(), "tx", sn_, n, std::nullopt, std::nullopt, engine().now(),
            std::to_string(chunk)});
    ++sn_;
  }
}

void UdpEchoClient::install() {
  port_ = net().bind(ctx_.node_id, Proto::udp, 0, [this](const Packet& p, std::size_t) {
    if (!node().alive()) return;
    const auto h = parse_pdu(p.payload);
    if (!h) return;
    record({engine().now(), "rx", h->sn, p.payload.size(), p.origin, p.app, h->created, "echo"});
  });
  every(1.0 / opt_.frequency, [this] {
    Packet p;
    p.proto = Proto::udp;
    p.dst = opt_.address;
    p.sport = port_;
    p.dport = opt_.port;
    p.payload = make_pdu(sn_, engine().now(), opt_.payload_size, pattern_);
    p.created_at = engine().now();
    p.origin = ctx_.node_id;
    p.app = ctx_.app_id;
    record({engine().now(), "tx", sn_, p.payload.size(), std::nullopt, std::nullopt,
            engine().now(), ""});
    ++sn_;
    net().send(ctx_.node_id, std::move(p));
  });
}

void EchoServer::install() {
  net().bind(ctx_.node_id, Proto::udp, opt_.port, [this](const Packet& p, std::size_t) {
    if (!active()) return;
    const auto h = parse_pdu(p.payload);
    record({engine().now(), "rx", h ? h->sn : 0, p.payload.size(), p.origin, p.app,
            h ? std::optional{h->created} : std::nullopt, "udp"});
    Packet out;
    out.proto = Proto::udp;
    out.dst = p.src;
    out.sport = opt_.port;
    out.dport = p.sport;
    out.payload = opt_.echo ? p.payload
                            : std::vector<std::uint8_t>(
                                  p.payload.begin(),
                                  p.payload.begin() + static_cast<std::ptrdiff_t>(std::min(
                                                          p.payload.size(), kPduHeaderBytes)));
    out.created_at = engine().now();
    out.origin = ctx_.node_id;
    out.app = ctx_.app_id;
    net().send(ctx_.node_id, std::move(out));
  });
  receiver_ = std::make_unique<ReliableReceiver>(
      engine(), net(), ctx_.node_id, opt_.port, [this](const ReliableReceiver::Message& m) {
        if (!active()) return;
        const auto h = parse_pdu(m.bytes);
        record({engine().now(), "rx", h ? h->sn : 0, m.bytes.size(), m.origin, m.app,
                h ? std::optional{h->created} : std::nullopt, "tcp"});
      });
}

// ---- NAT application -----------------------------------------------------------------------

void NatApp::install() {
  const auto& devs = net().node_devices(ctx_.node_id);
  if (opt_.internal_device >= devs.size() || opt_.external_device >= devs.size() ||
      opt_.internal_device == opt_.external_device) {
    throw SimError(Errc::build_error, "NAT device indices do not name two distinct devices");
  }
  const std::size_t in_dev = devs[opt_.internal_device];
  const std::size_t ex_dev = devs[opt_.external_device];

  net().set_transit_hook(ctx_.node_id, [this, in_dev, ex_dev](const Packet& p, std::size_t dev) {
    if (dev != in_dev || p.proto != Proto::udp || !node().alive()) return false;
    const auto& in = net().device(in_dev);
    const auto& st = net().stack(*in.stack);
    if ((p.dst & st.mask) == (in.address & st.mask)) return false;
    std::uint16_t ext = 0;
    try {
      ext = table_.outbound(p.src, p.sport);
    } catch (const SimError&) {
      record({engine().now(), "drop", 0, p.payload.size(), p.origin, p.app, std::nullopt,
              "PortExhaustion"});
      return true;
    }
    Packet out = p;
    out.src = net().device(ex_dev).address;
    out.sport = ext;
    record({engine().now(), "nat", ext, p.payload.size(), p.origin, p.app, std::nullopt, "out"});
    net().send(ctx_.node_id, std::move(out));
    return true;
  });
  net().set_unbound_hook(ctx_.node_id, [this, ex_dev](const Packet& p, std::size_t dev) {
    if (dev != ex_dev || p.proto != Proto::udp || !node().alive()) return false;
    const auto m = table_.inbound(p.dport);
    if (!m) {
      record({engine().now(), "drop", p.dport, p.payload.size(), p.origin, p.app, std::nullopt,
              "UnknownPort"});
      return false;
    }
    Packet out = p;
    out.dst = m->first;
    out.dport = m->second;
    record({engine().now(), "nat", p.dport, p.payload.size(), p.origin, p.app, std::nullopt,
            "in"});
    net().send(ctx_.node_id, std::move(out));
    return true;
  });
}

}  // namespace iodsim
