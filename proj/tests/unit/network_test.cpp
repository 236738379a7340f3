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
#include <gtest/gtest.h>

#include <map>

#include "iodsim/error.hpp"
#include "iodsim/network.hpp"
#include "iodsim/transport.hpp"

namespace iodsim {
namespace {

struct Fixture {
  Engine engine{1};
  std::map<std::size_t, Vec3> pos;
  std::map<std::size_t, double> dies_at;
  Network net{engine, [this](std::size_t n, Seconds) { return pos.at(n); },
              [this](std::size_t n, Seconds t) {
                auto it = dies_at.find(n);
                return it == dies_at.end() || t < it->second;
              }};

  std::size_t wifi(double fixed_rate = 0.0) {
    Stack s;
    s.radio.tx_power_dbm = 16;
    s.radio.rx_sensitivity_dbm = -90;
    s.radio.noise_floor_dbm = -94;
    s.loss = std::make_shared<FriisLoss>(2.4e9);
    if (fixed_rate > 0.0) s.fixed_rate_bps = fixed_rate;
    return net.add_stack(s);
  }
};

Packet udp(Ipv4 dst, std::uint16_t dport, std::size_t bytes) {
  Packet p;
  p.dst = dst;
  p.dport = dport;
  p.payload.assign(bytes, 0xAB);
  return p;
}

TEST(Ipv4, ParseFormatRoundTrip) {
  EXPECT_EQ(parse_ipv4("200.0.0.1"), 0xC8000001u);
  EXPECT_EQ(format_ipv4(0x0A010002u), "10.1.0.2");
  for (auto bad : {"1.2.3", "1.2.3.256", "1.2.3.4.", "a.b.c.d", "1..2.3", " 1.2.3.4"}) {
    EXPECT_FALSE(parse_ipv4(bad)) << bad;
  }
  for (Ipv4 a : {0u, 1u, 0xFFFFFFFFu, 0x7F000001u, 0xC0A80101u}) {
    EXPECT_EQ(parse_ipv4(format_ipv4(a)), a);
  }
}

TEST(Network, AddressingAccessFirstThenStations) {
  Fixture f;
  const auto s = f.wifi();
  const auto a = f.net.add_node(EntityKind::drone);
  const auto b = f.net.add_node(EntityKind::zsp);
  const auto c = f.net.add_node(EntityKind::remote);
  f.pos = {{a, {0, 0, 10}}, {b, {10, 0, 0}}, {c, {0, 0, 0}}};
  const auto sta = f.net.add_radio_device(a, s, DeviceRole::station);
  const auto ap = f.net.add_radio_device(b, s, DeviceRole::access);
  const auto bus_c = f.net.attach_to_bus(c);
  const auto bus_b = f.net.attach_to_bus(b);
  f.net.finalize();
  EXPECT_EQ(format_ipv4(f.net.device(ap).address), "10.1.0.1");
  EXPECT_EQ(format_ipv4(f.net.device(sta).address), "10.1.0.2");
  EXPECT_EQ(format_ipv4(f.net.device(bus_c).address), "200.0.0.1");
  EXPECT_EQ(format_ipv4(f.net.device(bus_b).address), "200.0.0.2");
  EXPECT_EQ(f.net.device(bus_b).local, 2u);
  EXPECT_EQ(f.net.device(sta).serving, ap);
  ASSERT_EQ(f.net.device(sta).attachments.size(), 1u);
}

TEST(Network, DeliveryTimeIsSerializationPlusPropagation) {
  Fixture f;
  const auto s = f.wifi(1e6);
  const auto a = f.net.add_node(EntityKind::drone);
  const auto b = f.net.add_node(EntityKind::zsp);
  f.pos = {{a, {0, 0, 0}}, {b, {300, 0, 0}}};
  f.net.add_radio_device(a, s, DeviceRole::station);
  const auto ap = f.net.add_radio_device(b, s, DeviceRole::access);
  f.net.finalize();
  std::vector<Seconds> arrivals;
  f.net.bind(b, Proto::udp, 9, [&](const Packet&, std::size_t) { arrivals.push_back(f.engine.now()); });
  f.net.send(a, udp(f.net.device(ap).address, 9, 97));  // 125 bytes on the wire
  f.net.send(a, udp(f.net.device(ap).address, 9, 97));
  f.engine.run(1.0);
  ASSERT_EQ(arrivals.size(), 2u);
  const double ser = 125 * 8 / 1e6;
  const double prop = 300 / kSpeedOfLight;
  EXPECT_NEAR(arrivals[0], ser + prop, 2e-9);
  EXPECT_NEAR(arrivals[1], 2 * ser + prop, 2e-9);
}

TEST(Network, DropsBelowSensitivityAndCountsLinks) {
  Fixture f;
  const auto s = f.wifi();
  const auto a = f.net.add_node(EntityKind::drone);
  const auto b = f.net.add_node(EntityKind::zsp);
  f.pos = {{a, {0, 0, 0}}, {b, {50000, 0, 0}}};
  const auto sta = f.net.add_radio_device(a, s, DeviceRole::station);
  const auto ap = f.net.add_radio_device(b, s, DeviceRole::access);
  f.net.finalize();
  f.net.send(a, udp(f.net.device(ap).address, 9, 10));
  f.engine.run(1.0);
  const auto& st = f.net.link_stats().at({sta, ap});
  EXPECT_EQ(st.sent, 1u);
  EXPECT_EQ(st.delivered, 0u);
  EXPECT_EQ(st.dropped[static_cast<std::size_t>(DropReason::sensitivity_floor)], 1u);
}

TEST(Network, LinkConservationAfterDrain) {
  Fixture f;
  const auto s = f.wifi();
  const auto a = f.net.add_node(EntityKind::drone);
  const auto b = f.net.add_node(EntityKind::zsp);
  f.pos = {{a, {0, 0, 20}}, {b, {40, 0, 0}}};
  f.net.add_radio_device(a, s, DeviceRole::station);
  const auto ap = f.net.add_radio_device(b, s, DeviceRole::access);
  f.net.finalize();
  f.dies_at[b] = 0.5;
  for (int i = 0; i < 100; ++i) {
    f.engine.schedule(i * 0.01, [&] { f.net.send(a, udp(f.net.device(ap).address, 9, 200)); });
  }
  f.engine.run(5.0);
  for (const auto& [link, st] : f.net.link_stats()) {
    EXPECT_EQ(st.sent, st.delivered + st.total_dropped());
  }
  EXPECT_GT(f.net.drops()[static_cast<std::size_t>(DropReason::receiver_down)], 0u);
  EXPECT_GT(f.net.drops()[static_cast<std::size_t>(DropReason::no_listener)], 0u);
}

TEST(Network, EphemeralPortsSkipBound) {
  Fixture f;
  const auto n = f.net.add_node(EntityKind::remote);
  f.net.bind(n, Proto::udp, kFirstEphemeralPort, {});
  EXPECT_EQ(f.net.bind(n, Proto::tcp, 0, {}), kFirstEphemeralPort + 1);
  EXPECT_TRUE(f.net.bound(n, Proto::tcp, kFirstEphemeralPort + 1));
}

TEST(Network, BackboneRequiresBus) {
  Fixture f;
  const auto a = f.net.add_node(EntityKind::remote);
  const auto b = f.net.add_node(EntityKind::remote);
  f.net.attach_to_bus(a);
  f.net.finalize();
  try {
    f.net.backbone_deliver(a, b, udp(0, 1, 1));
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), Errc::not_on_bus);
  }
}

TEST(Network, BestAccessWins) {
  Fixture f;
  const auto s = f.wifi();
  const auto sta_node = f.net.add_node(EntityKind::drone);
  const auto near = f.net.add_node(EntityKind::zsp);
  const auto far = f.net.add_node(EntityKind::zsp);
  f.pos = {{sta_node, {0, 0, 0}}, {near, {10, 0, 0}}, {far, {100, 0, 0}}};
  const auto sta = f.net.add_radio_device(sta_node, s, DeviceRole::station);
  f.net.add_radio_device(far, s, DeviceRole::access);
  const auto ap_near = f.net.add_radio_device(near, s, DeviceRole::access);
  f.net.finalize();
  EXPECT_EQ(f.net.device(sta).serving, ap_near);
  f.pos[sta_node] = {95, 0, 0};
  f.net.update_attachments(sta_node);
  EXPECT_NE(f.net.device(sta).serving, ap_near);
  EXPECT_EQ(f.net.device(sta).attachments.size(), 2u);
}

TEST(Reliable, DeliversMessagesInOrderOverLossyLink) {
  Fixture f;
  Stack s;
  s.radio.tx_power_dbm = 0;
  s.radio.rx_sensitivity_dbm = -80;
  s.radio.noise_floor_dbm = -85;
  s.loss = std::make_shared<FriisLoss>(2.4e9);
  s.fixed_rate_bps = 10e6;
  s.probabilistic_loss = true;
  const auto st = f.net.add_stack(s);
  const auto a = f.net.add_node(EntityKind::drone);
  const auto b = f.net.add_node(EntityKind::zsp);
  // About 78 dB of loss: SNR margin near 2 dB, so roughly 12 % of frames drop.
  f.pos = {{a, {0, 0, 0}}, {b, {80, 0, 0}}};
  f.net.add_radio_device(a, st, DeviceRole::station);
  const auto ap = f.net.add_radio_device(b, st, DeviceRole::access);
  f.net.finalize();
  std::vector<std::size_t> sizes;
  ReliableReceiver rx(f.engine, f.net, b, 4242,
                      [&](const ReliableReceiver::Message& m) { sizes.push_back(m.bytes.size()); });
  ReliableSender tx(f.engine, f.net, a, f.net.device(ap).address, 4242);
  std::vector<std::uint64_t> acked;
  tx.on_acked([&](std::uint64_t m) { acked.push_back(m); });
  for (std::size_t k = 1; k <= 20; ++k) tx.send(std::vector<std::uint8_t>(k * 500, 1));
  f.engine.run(30.0);
  ASSERT_EQ(sizes.size(), 20u);
  for (std::size_t k = 0; k < sizes.size(); ++k) EXPECT_EQ(sizes[k], (k + 1) * 500);
  EXPECT_EQ(acked.size(), 20u);
  EXPECT_TRUE(std::is_sorted(acked.begin(), acked.end()));
  EXPECT_GT(tx.retransmissions(), 0u);
  EXPECT_GT(f.net.drops()[static_cast<std::size_t>(DropReason::random_loss)], 0u);
}

}  // namespace
}  // namespace iodsim
