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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iodsim/transport.hpp"

namespace iodsim {

// ---- telemetry payload and FSM ---------------------------------------------

struct TelemetryPayload {
  std::uint32_t id = 0;
  std::uint32_t sn = 0;
  std::string cmd;
  double lat = 0.0;  ///< world x
  double lon = 0.0;  ///< world y
  double alt = 0.0;  ///< world z
  std::array<std::int64_t, 3> vel{};

  friend bool operator==(const TelemetryPayload&, const TelemetryPayload&) = default;
};

std::string serialize(const TelemetryPayload& p);
/// Nullopt unless the text is a JSON object with exactly the expected
/// fields and types, and cmd is one of the four known commands.
std::optional<TelemetryPayload> parse_telemetry(std::string_view text);

enum class TelemetryState { fresh, hello_sent, connected };
std::string_view to_string(TelemetryState s);

/// Client side of the rendezvous: NEW -> HELLO_SENT -> CONNECTED.
class TelemetryFsm {
 public:
  enum class Send { hello, update };

  TelemetryState state() const { return state_; }
  /// HELLO while not connected (first or retry), UPDATE afterwards.
  Send on_tick();
  /// Returns true when it caused the transition to CONNECTED.
  bool on_hello_ack();
  void on_update_ack() {}

 private:
  TelemetryState state_ = TelemetryState::fresh;
};

// ---- generic traffic PDU ------------------------------------------------------

inline constexpr std::size_t kPduHeaderBytes = 12;

struct PduHeader {
  std::uint32_t sn = 0;
  Seconds created = 0.0;
};

/// 12-byte header (big-endian u32 sn, u64 creation time in ns) followed by
/// `payload` bytes of an incrementing 16-bit counter continued across calls.
std::vector<std::uint8_t> make_pdu(std::uint32_t sn, Seconds created, std::size_t payload,
                                   std::uint16_t& counter);
std::optional<PduHeader> parse_pdu(std::span<const std::uint8_t> bytes);

// ---- NAT ----------------------------------------------------------------------

inline constexpr std::uint16_t kNatFirstPort = 49152;
inline constexpr std::size_t kNatPoolSize = 16384;

/// External port <-> (internal address, internal port), allocated
/// sequentially and kept for the whole run.
class NatTable {
 public:
  explicit NatTable(std::uint16_t first_port = kNatFirstPort, std::size_t pool = kNatPoolSize);

  /// Existing mapping or the next free port. Throws PortExhaustion.
  std::uint16_t outbound(Ipv4 addr, std::uint16_t port);
  std::optional<std::pair<Ipv4, std::uint16_t>> inbound(std::uint16_t external) const;
  std::size_t size() const { return by_port_.size(); }

 private:
  std::uint16_t first_;
  std::size_t pool_;
  std::map<std::pair<Ipv4, std::uint16_t>, std::uint16_t> by_flow_;
  std::map<std::uint16_t, std::pair<Ipv4, std::uint16_t>> by_port_;
};

// ---- applications ----------------------------------------------------------------

struct AppEvent {
  Seconds time = 0.0;
  std::string kind;  ///< tx, rx, ack, drop, lost, connected, malformed, nat
  std::uint32_t sn = 0;
  std::size_t bytes = 0;
  std::optional<std::size_t> peer_node;
  std::optional<std::uint32_t> peer_app;
  std::optional<Seconds> created;
  std::string detail;
};

struct AppContext {
  Engine* engine = nullptr;
  Network* net = nullptr;
  Node* node = nullptr;
  std::size_t node_id = 0;
  std::uint32_t app_id = 0;
  Seconds start = 0.0;
  Seconds stop = 0.0;
  ReliableOptions reliable;
};

class Application {
 public:
  explicit Application(AppContext ctx) : ctx_(ctx) {}
  virtual ~Application() = default;
  Application(const Application&) = delete;
  Application& operator=(const Application&) = delete;

  virtual std::string_view type() const = 0;
  /// Binds sockets and schedules the first activity at StartTime.
  virtual void install() = 0;

  std::uint32_t id() const { return ctx_.app_id; }
  std::size_t node_id() const { return ctx_.node_id; }
  Seconds start_time() const { return ctx_.start; }
  Seconds stop_time() const { return ctx_.stop; }
  const std::vector<AppEvent>& log() const { return log_; }

 protected:
  Engine& engine() const { return *ctx_.engine; }
  Network& net() const { return *ctx_.net; }
  Node& node() const { return *ctx_.node; }
  bool active() const;
  void record(AppEvent e);
  /// Runs fn at start, start + interval, ... while active.
  void every(Seconds interval, std::function<void()> fn);

  AppContext ctx_;

 private:
  void tick(Seconds interval, std::uint64_t k, std::shared_ptr<std::function<void()>> fn);
  std::vector<AppEvent> log_;
};

class TelemetryClient final : public Application {
 public:
  struct Options {
    Ipv4 destination = kBroadcast;
    std::uint16_t port = 80;
    Seconds interval = 1.0;
    bool free_data = false;
  };
  TelemetryClient(AppContext ctx, Options o) : Application(ctx), opt_(o) {}
  std::string_view type() const override { return "telemetryClient"; }
  void install() override;
  TelemetryState state() const { return fsm_.state(); }

 private:
  void on_tick();
  void on_packet(const Packet& p);

  Options opt_;
  TelemetryFsm fsm_;
  std::uint16_t port_ = 0;
  std::uint32_t sn_ = 0;
  Ipv4 server_ = 0;
  std::uint16_t server_port_ = 0;
};

class TelemetryServer final : public Application {
 public:
  struct Options {
    std::uint16_t port = 80;
    bool store_data = false;
  };
  TelemetryServer(AppContext ctx, Options o) : Application(ctx), opt_(o) {}
  std::string_view type() const override { return "telemetryServer"; }
  void install() override;
  std::uint64_t malformed() const { return malformed_; }

 private:
  void on_packet(const Packet& p);

  Options opt_;
  std::uint64_t malformed_ = 0;
};

struct TrafficOptions {
  Ipv4 address = 0x7F000001u;  // 127.0.0.1
  std::uint16_t port = 4242;
  std::size_t payload_size = 65470;
  double frequency = 1.0;
};

/// Fixed-rate PDUs over the reliable channel.
class PeriodicClient final : public Application {
 public:
  PeriodicClient(AppContext ctx, TrafficOptions o) : Application(ctx), opt_(o) {}
  std::string_view type() const override { return "periodicClient"; }
  void install() override;

 private:
  TrafficOptions opt_;
  std::unique_ptr<ReliableSender> sender_;
  std::uint32_t sn_ = 0;
  std::uint16_t pattern_ = 0;
  std::map<std::uint64_t, std::uint32_t> sn_of_;
};

/// Offloads the drone's storage to a server, freeing bits on acknowledgement.
class StorageClient final : public Application {
 public:
  StorageClient(AppContext ctx, TrafficOptions o) : Application(ctx), opt_(o) {}
  std::string_view type() const override { return "storageClient"; }
  void install() override;

  std::uint64_t acked_bits() const { return acked_bits_; }

 private:
  void try_send();

  TrafficOptions opt_;
  std::unique_ptr<ReliableSender> sender_;
  StoragePeripheral* storage_ = nullptr;
  std::map<std::uint64_t, std::pair<std::uint32_t, std::uint64_t>> in_flight_;  // msg -> sn, bits
  std::uint64_t in_flight_bits_ = 0;
  std::uint64_t acked_bits_ = 0;
  std::uint32_t sn_ = 0;
  std::uint16_t pattern_ = 0;
  bool pending_ = false;
  bool started_ = false;
};

/// Fixed-rate PDUs over plain datagrams.
class UdpEchoClient final : public Application {
 public:
  UdpEchoClient(AppContext ctx, TrafficOptions o) : Application(ctx), opt_(o) {}
  std::string_view type() const override { return "udpEchoClient"; }
  void install() override;

 private:
  TrafficOptions opt_;
  std::uint16_t port_ = 0;
  std::uint32_t sn_ = 0;
  std::uint16_t pattern_ = 0;
};

/// Logs every datagram or reliable message it receives. Datagrams are
/// answered with a mirror (echo) or with the 12-byte header only.
class EchoServer final : public Application {
 public:
  struct Options {
    std::uint16_t port = 4242;
    bool echo = true;
  };
  EchoServer(AppContext ctx, Options o) : Application(ctx), opt_(o) {}
  std::string_view type() const override { return "echoServer"; }
  void install() override;

 private:
  Options opt_;
  std::unique_ptr<ReliableReceiver> receiver_;
};

/// UDP port translation between an internal and an external device of
/// the same node.
class NatApp final : public Application {
 public:
  struct Options {
    std::size_t internal_device = 0;  ///< index into the node's devices
    std::size_t external_device = 1;
  };
  NatApp(AppContext ctx, Options o) : Application(ctx), opt_(o) {}
  std::string_view type() const override { return "nat"; }
  void install() override;
  const NatTable& table() const { return table_; }

 private:
  Options opt_;
  NatTable table_;
};

}  // namespace iodsim
