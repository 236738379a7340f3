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
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iodsim/channel.hpp"
#include "iodsim/engine.hpp"
#include "iodsim/entities.hpp"

namespace iodsim {

using Ipv4 = std::uint32_t;
inline constexpr Ipv4 kBroadcast = 0xFFFFFFFFu;
inline constexpr Ipv4 kBusNetwork = 0xC8000000u;  // 200.0.0.0/8
inline constexpr Ipv4 kBusMask = 0xFF000000u;
inline constexpr std::uint16_t kFirstEphemeralPort = 32768;

std::optional<Ipv4> parse_ipv4(std::string_view text);
std::string format_ipv4(Ipv4 a);

enum class Proto : std::uint8_t { tcp = 6, udp = 17 };
std::string_view to_string(Proto p);

/// Reliable-transport fields carried by tcp packets.
struct Segment {
  std::uint32_t epoch = 0;
  std::uint32_t seq = 0;
  std::uint32_t ack = 0;
  bool is_ack = false;
  bool last = false;  ///< final segment of an application message
  std::uint64_t message = 0;
};

struct Packet {
  std::uint64_t uid = 0;
  Proto proto = Proto::udp;
  Ipv4 src = 0;
  Ipv4 dst = 0;
  std::uint16_t sport = 0;
  std::uint16_t dport = 0;
  std::vector<std::uint8_t> payload;
  std::optional<Segment> segment;
  Seconds created_at = 0.0;
  std::size_t origin = 0;    ///< global id of the node that created it
  std::uint32_t app = 0;     ///< index of the originating application on its node

  /// Bytes on the wire: payload plus IPv4 and transport headers.
  std::size_t size() const { return payload.size() + 20 + (proto == Proto::udp ? 8 : 20); }
};

using PacketPtr = std::shared_ptr<const Packet>;

/// Printable form used in reports: ASCII payloads verbatim, binary ones
/// as a length plus a short hex prefix.
std::string payload_text(const std::vector<std::uint8_t>& payload);

enum class DropReason {
  sensitivity_floor,
  rate_zero,
  sender_depleted,
  receiver_down,
  no_route,
  no_listener,
  random_loss,
};
inline constexpr std::size_t kDropReasonCount = 7;
std::string_view to_string(DropReason r);

enum class DeviceRole { access, station, bus };
std::string_view to_string(DeviceRole r);

struct PacketRecord {
  Seconds time = 0.0;
  bool tx = true;
  PacketPtr packet;
  std::optional<double> rx_power_dbm;
};

struct Attachment {
  Seconds time = 0.0;
  std::optional<std::size_t> access;  ///< serving device id
};

struct RadioEnergy {
  double idle_w = 0.0;
  double tx_w = 0.0;
  double rx_w = 0.0;
};

struct NetDevice {
  std::size_t id = 0;
  std::size_t node = 0;   ///< global node id
  std::size_t local = 1;  ///< 1-based index on the host
  std::optional<std::size_t> stack;  ///< empty for the backbone
  DeviceRole role = DeviceRole::station;
  Ipv4 address = 0;
  RadioEnergy energy;
  std::vector<PacketRecord> records;
  double tx_busy = 0.0;  ///< seconds spent serializing
  double rx_busy = 0.0;
  std::optional<std::size_t> serving;
  std::vector<Attachment> attachments;

  /// "internet" for the backbone, otherwise the PHY type.
  std::string layer;
};

/// One PHY/MAC/NET triple of the scenario.
struct Stack {
  std::string phy_type = "wifi";
  std::string mac_type = "wifi";
  RadioParams radio;
  std::shared_ptr<PropagationLossModel> loss;
  std::optional<double> fixed_rate_bps;
  RateTable rate_table = default_rate_table();
  bool probabilistic_loss = false;
  Ipv4 network = 0x0A010000u;  // 10.1.0.0
  Ipv4 mask = 0xFFFFFF00u;
};

struct LinkStats {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::array<std::uint64_t, kDropReasonCount> dropped{};

  std::uint64_t total_dropped() const;
};

struct BusConfig {
  double rate_bps = 100e6;
  Seconds delay = 0.001;
};

/// Packet-level network: radio links between devices of the same stack,
/// a shared backbone bus and static routing.
class Network {
 public:
  using Receiver = std::function<void(const Packet&, std::size_t device)>;
  /// Returns true when the packet was consumed.
  using Hook = std::function<bool(const Packet&, std::size_t device)>;
  using PositionFn = std::function<Vec3(std::size_t node, Seconds t)>;
  using AliveFn = std::function<bool(std::size_t node, Seconds t)>;

  Network(Engine& engine, PositionFn position, AliveFn alive);

  std::size_t add_stack(Stack stack);
  const Stack& stack(std::size_t i) const { return stacks_.at(i); }
  std::size_t stack_count() const { return stacks_.size(); }

  void set_bus(BusConfig bus) { bus_ = bus; }
  const BusConfig& bus() const { return bus_; }

  /// Registers a node; nodes must be added in global-id order.
  std::size_t add_node(EntityKind kind);
  std::size_t node_count() const { return nodes_.size(); }

  std::size_t add_radio_device(std::size_t node, std::size_t stack, DeviceRole role,
                               RadioEnergy energy = {});
  std::size_t attach_to_bus(std::size_t node);

  /// Assigns addresses. Radio: per stack, access devices first, then
  /// stations, each in global node order. Bus: 200.0.0.1 onward in
  /// attachment order. Also computes the initial attachments.
  void finalize();

  const std::vector<NetDevice>& devices() const { return devices_; }
  const NetDevice& device(std::size_t id) const { return devices_.at(id); }
  const std::vector<std::size_t>& node_devices(std::size_t node) const;
  std::optional<std::size_t> device_by_address(Ipv4 a) const;
  std::optional<std::size_t> bus_device(std::size_t node) const;

  /// Binds (proto, port) on a node; port 0 picks the next ephemeral port.
  std::uint16_t bind(std::size_t node, Proto proto, std::uint16_t port, Receiver rx);
  std::uint16_t next_ephemeral(std::size_t node);
  bool bound(std::size_t node, Proto proto, std::uint16_t port) const;

  /// Hook for packets transiting the node (not addressed to it).
  void set_transit_hook(std::size_t node, Hook h);
  /// Hook for packets addressed to the node with no bound socket.
  void set_unbound_hook(std::size_t node, Hook h);
  void set_forwarding(std::size_t node, bool on);

  /// First address of the node, used as the default source.
  Ipv4 primary_address(std::size_t node) const;

  /// Routes and transmits. Fills uid, created_at defaults and src when 0.
  void send(std::size_t node, Packet p);

  /// Direct bus transfer between two attached nodes. Throws NotOnBus.
  void backbone_deliver(std::size_t from_node, std::size_t to_node, Packet p);

  /// Re-evaluates the serving access device of every station whose stack
  /// is touched by `node`; call on mobility ticks.
  void update_attachments(std::size_t node);

  double rx_power_between(std::size_t from_dev, std::size_t to_dev, Seconds t) const;

  /// Per directed device pair.
  const std::map<std::pair<std::size_t, std::size_t>, LinkStats>& link_stats() const {
    return link_stats_;
  }
  std::array<std::uint64_t, kDropReasonCount> drops() const { return drops_; }

 private:
  struct NodeInfo {
    EntityKind kind;
    std::vector<std::size_t> devices;
    std::map<std::pair<Proto, std::uint16_t>, Receiver> sockets;
    std::uint16_t next_port = kFirstEphemeralPort;
    Hook transit;
    Hook unbound;
    bool forwarding = false;
  };

  void route(std::size_t node, const PacketPtr& p);
  void radio_tx(std::size_t from, std::size_t to, const PacketPtr& p);
  void bus_tx(std::size_t from, std::size_t to, const PacketPtr& p);
  void receive(std::size_t device, const PacketPtr& p);
  void drop(DropReason r, std::optional<std::pair<std::size_t, std::size_t>> link = {});
  bool owns(std::size_t node, Ipv4 a) const;
  std::optional<std::size_t> best_access(std::size_t station) const;
  void refresh(std::size_t station);

  Engine& engine_;
  PositionFn position_;
  AliveFn alive_;
  std::vector<Stack> stacks_;
  std::vector<NodeInfo> nodes_;
  std::vector<NetDevice> devices_;
  std::map<Ipv4, std::size_t> by_address_;
  std::map<std::pair<std::size_t, std::size_t>, Seconds> link_busy_;
  std::map<std::pair<std::size_t, std::size_t>, LinkStats> link_stats_;
  std::array<std::uint64_t, kDropReasonCount> drops_{};
  BusConfig bus_;
  Seconds bus_busy_ = 0.0;
  std::uint64_t next_uid_ = 1;
  bool finalized_ = false;
};

}  // namespace iodsim
