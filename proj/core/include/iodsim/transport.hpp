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

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "iodsim/network.hpp"

namespace iodsim {

struct ReliableOptions {
  std::size_t window = 8;        ///< segments in flight
  std::size_t mss = 1380;        ///< bytes per segment
  Seconds rto = 0.2;             ///< retransmission timeout
  Seconds connection_timeout = 5.0;
};

/// Sending half of the reliable message channel: go-back-N with
/// cumulative acknowledgements and a connection epoch that is bumped
/// whenever the peer has been unreachable for connection_timeout.
class ReliableSender {
 public:
  using AckedFn = std::function<void(std::uint64_t message)>;
  using LostFn = std::function<void(const std::vector<std::uint64_t>& messages)>;

  ReliableSender(Engine& engine, Network& net, std::size_t node, Ipv4 dst, std::uint16_t dport,
                 ReliableOptions opts = {});
  ReliableSender(const ReliableSender&) = delete;
  ReliableSender& operator=(const ReliableSender&) = delete;

  /// Queues one application message; returns its id.
  std::uint64_t send(std::vector<std::uint8_t> bytes);

  void on_acked(AckedFn f) { acked_ = std::move(f); }
  /// Called with every unacknowledged message when the connection drops.
  void on_lost(LostFn f) { lost_ = std::move(f); }

  std::size_t unacked_messages() const { return open_messages_.size(); }
  std::size_t queued_segments() const { return segments_.size() - (next_ - base_); }
  std::uint32_t epoch() const { return epoch_; }
  std::uint64_t connections_lost() const { return lost_count_; }
  std::uint64_t retransmissions() const { return retransmissions_; }
  std::uint16_t local_port() const { return port_; }
  void set_origin_app(std::uint32_t app) { app_ = app; }

 private:
  struct Seg {
    std::uint64_t message;
    bool last;
    std::vector<std::uint8_t> bytes;
    Seconds created;
  };

  void pump();
  void transmit(std::uint32_t seq);
  void arm_timer();
  void on_timer();
  void on_ack(const Packet& p);

  Engine& engine_;
  Network& net_;
  std::size_t node_;
  Ipv4 dst_;
  std::uint16_t dport_;
  std::uint16_t port_;
  ReliableOptions opts_;

  std::deque<Seg> segments_;  // segments_[0] has sequence number base_
  std::uint32_t base_ = 0;
  std::uint32_t next_ = 0;
  std::uint32_t epoch_ = 0;
  std::uint64_t next_message_ = 1;
  std::vector<std::uint64_t> open_messages_;
  std::optional<EventId> timer_;
  Seconds last_progress_ = 0.0;
  AckedFn acked_;
  LostFn lost_;
  std::uint64_t lost_count_ = 0;
  std::uint64_t retransmissions_ = 0;
  std::uint32_t app_ = 0;
};

/// Receiving half: in-order reassembly per (address, port) peer.
class ReliableReceiver {
 public:
  struct Message {
    Ipv4 src = 0;
    std::uint16_t sport = 0;
    std::size_t origin = 0;
    std::uint32_t app = 0;
    std::vector<std::uint8_t> bytes;
    Seconds completed_at = 0.0;
  };
  using MessageFn = std::function<void(const Message&)>;

  ReliableReceiver(Engine& engine, Network& net, std::size_t node, std::uint16_t port,
                   MessageFn on_message);
  ReliableReceiver(const ReliableReceiver&) = delete;
  ReliableReceiver& operator=(const ReliableReceiver&) = delete;

 private:
  struct Peer {
    std::uint32_t epoch = 0;
    std::uint32_t expected = 0;
    std::vector<std::uint8_t> partial;
  };

  void on_segment(const Packet& p);

  Engine& engine_;
  Network& net_;
  std::size_t node_;
  std::uint16_t port_;
  MessageFn on_message_;
  std::map<std::pair<Ipv4, std::uint16_t>, Peer> peers_;
};

}  // namespace iodsim
