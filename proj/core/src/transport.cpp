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
#include "iodsim/transport.hpp"

#include <algorithm>

namespace iodsim {

ReliableSender::ReliableSender(Engine& engine, Network& net, std::size_t node, Ipv4 dst,
                               std::uint16_t dport, ReliableOptions opts)
    : engine_(engine), net_(net), node_(node), dst_(dst), dport_(dport), opts_(opts) {
  opts_.window = std::max<std::size_t>(1, opts_.window);
  opts_.mss = std::max<std::size_t>(1, opts_.mss);
  port_ = net_.bind(node_, Proto::tcp, 0, [this](const Packet& p, std::size_t) { on_ack(p); });
}

std::uint64_t ReliableSender::send(std::vector<std::uint8_t> bytes) {
  const std::uint64_t id = next_message_++;
  const Seconds now = engine_.now();
  std::size_t off = 0;
  do {
    const std::size_t n = std::min(opts_.mss, bytes.size() - off);
    Seg s{id, off + n >= bytes.size(), {bytes.begin() + off, bytes.begin() + off + n}, now};
    segments_.push_back(std::move(s));
    off += n;
  } while (off < bytes.size());
  open_messages_.push_back(id);
  pump();
  return id;
}

void ReliableSender::pump() {
  while (next_ - base_ < opts_.window && next_ - base_ < segments_.size()) {
    if (next_ == base_) last_progress_ = engine_.now();
    transmit(next_++);
  }
  if (next_ != base_ && !timer_) arm_timer();
}

void ReliableSender::transmit(std::uint32_t seq) {
  const Seg& s = segments_[seq - base_];
  Packet p;
  p.proto = Proto::tcp;
  p.dst = dst_;
  p.sport = port_;
  p.dport = dport_;
  p.payload = s.bytes;
  p.created_at = s.created;
  p.origin = node_;
  p.app = app_;
  p.segment = Segment{epoch_, seq, 0, false, s.last, s.message};
  net_.send(node_, std::move(p));
}

void ReliableSender::arm_timer() {
  if (timer_) engine_.cancel(*timer_);
  timer_ = engine_.schedule(opts_.rto, [this] {
    timer_.reset();
    on_timer();
  });
}

void ReliableSender::on_timer() {
  if (next_ == base_) return;
  if (engine_.now() - last_progress_ >= opts_.connection_timeout) {
    ++lost_count_;
    ++epoch_;
    auto lost = std::move(open_messages_);
    open_messages_.clear();
    segments_.clear();
    base_ = next_ = 0;
    if (lost_) lost_(lost);
    return;
  }
  // Go-back-N: resend the whole window.
  for (std::uint32_t seq = base_; seq != next_; ++seq) {
    ++retransmissions_;
    transmit(seq);
  }
  arm_timer();
}

void ReliableSender::on_ack(const Packet& p) {
  if (!p.segment || !p.segment->is_ack || p.segment->epoch != epoch_) return;
  const std::uint32_t ack = p.segment->ack;
  if (ack <= base_ || ack > next_) return;
  std::vector<std::uint64_t> done;
  while (base_ < ack) {
    if (segments_.front().last) done.push_back(segments_.front().message);
    segments_.pop_front();
    ++base_;
  }
  last_progress_ = engine_.now();
  if (timer_) {
    engine_.cancel(*timer_);
    timer_.reset();
  }
  for (auto id : done) {
    open_messages_.erase(std::find(open_messages_.begin(), open_messages_.end(), id));
  }
  pump();
  if (next_ != base_ && !timer_) arm_timer();
  for (auto id : done) {
    if (acked_) acked_(id);
  }
}

ReliableReceiver::ReliableReceiver(Engine& engine, Network& net, std::size_t node,
                                   std::uint16_t port, MessageFn on_message)
    : engine_(engine), net_(net), node_(node), port_(port), on_message_(std::move(on_message)) {
  net_.bind(node_, Proto::tcp, port_, [this](const Packet& p, std::size_t) { on_segment(p); });
}

void ReliableReceiver::on_segment(const Packet& p) {
  if (!p.segment || p.segment->is_ack) return;
  auto& peer = peers_[{p.src, p.sport}];
  const auto& seg = *p.segment;
  if (seg.epoch < peer.epoch) return;
  if (seg.epoch > peer.epoch) peer = Peer{seg.epoch, 0, {}};

  std::optional<Message> done;
  if (seg.seq == peer.expected) {
    ++peer.expected;
    peer.partial.insert(peer.partial.end(), p.payload.begin(), p.payload.end());
    if (seg.last) {
      done = Message{p.src, p.sport, p.origin, p.app, std::move(peer.partial), engine_.now()};
      peer.partial.clear();
    }
  }

  Packet ack;
  ack.proto = Proto::tcp;
  ack.dst = p.src;
  ack.sport = port_;
  ack.dport = p.sport;
  ack.created_at = engine_.now();
  ack.origin = node_;
  ack.segment = Segment{peer.epoch, 0, peer.expected, true, false, 0};
  net_.send(node_, std::move(ack));

  if (done && on_message_) on_message_(*done);
}

}  // namespace iodsim
