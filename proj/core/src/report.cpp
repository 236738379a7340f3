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
#include "iodsim/report.hpp"

#include <algorithm>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <type_traits>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "iodsim/error.hpp"
#include "iodsim/pcap.hpp"

namespace iodsim {

namespace {

// Streaming XML output, one element per line with one-space indentation.
// Reports can hold millions of packet records, so nothing is buffered
// beyond the open-element stack.
class XmlWriter {
 public:
  explicit XmlWriter(std::ostream& out) : out_(out) {
    out_ << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
  }

  void open(std::string_view name) {
    if (!stack_.empty()) {
      Frame& parent = stack_.back();
      if (parent.tag_open) out_ << ">\n";
      parent.tag_open = false;
      parent.children = true;
    }
    indent();
    out_ << '<' << name;
    stack_.push_back({std::string(name), true, false, false});
  }

  template <class T>
  void attr(std::string_view key, const T& value) {
    out_ << ' ' << key << "=\"";
    if constexpr (std::is_convertible_v<const T&, std::string_view>) {
      escape(value);
    } else {
      escape(fmt::format("{}", value));
    }
    out_ << '"';
  }

  void text(std::string_view s) {
    Frame& f = stack_.back();
    if (f.tag_open) out_ << '>';
    f.tag_open = false;
    f.text = true;
    escape(s);
  }

  void close() {
    Frame f = std::move(stack_.back());
    stack_.pop_back();
    if (f.tag_open) {
      out_ << "/>\n";
      return;
    }
    if (f.children) indent();
    out_ << "</" << f.name << ">\n";
  }

 private:
  struct Frame {
    std::string name;
    bool tag_open;
    bool children;
    bool text;
  };

  void indent() {
    for (std::size_t i = 0; i < stack_.size(); ++i) out_ << ' ';
  }

  void escape(std::string_view s) {
    for (char c : s) {
      switch (c) {
        case '&': out_ << "&amp;"; break;
        case '<': out_ << "&lt;"; break;
        case '>': out_ << "&gt;"; break;
        case '"': out_ << "&quot;"; break;
        default: out_ << c;
      }
    }
  }

  std::ostream& out_;
  std::vector<Frame> stack_;
};

std::string box_text(const Box3& b) {
  const auto a = b.to_array();
  return fmt::format("{} {} {} {} {} {}", a[0], a[1], a[2], a[3], a[4], a[5]);
}

void position(XmlWriter& w, const char* name, const Vec3& p) {
  w.open(name);
  w.attr("x", p.x);
  w.attr("y", p.y);
  w.attr("z", p.z);
  w.close();
}

void net_devices(XmlWriter& w, const Simulation& sim, std::size_t gid) {
  const Network& net = sim.network();
  w.open("NetDevices");
  for (auto id : net.node_devices(gid)) {
    const NetDevice& d = net.device(id);
    w.open("NetDevice");
    w.attr("id", d.local);
    w.attr("uid", d.id);
    w.attr("layer", d.layer);
    w.attr("role", to_string(d.role));
    w.attr("address", format_ipv4(d.address));
    if (d.stack) {
      const Stack& st = net.stack(*d.stack);
      const PhyConfig& pc = sim.config().phy.at(*d.stack);
      w.open("Phy");
      w.attr("type", st.phy_type);
      w.attr("frequency", st.radio.frequency_hz);
      w.attr("txPower", st.radio.tx_power_dbm);
      w.attr("txGain", st.radio.tx_gain_dbi);
      w.attr("rxGain", st.radio.rx_gain_dbi);
      w.attr("noiseFloor", st.radio.noise_floor_dbm);
      w.attr("rxSensitivity", st.radio.rx_sensitivity_dbm);
      w.attr("propagationLoss", pc.loss.type);
      if (st.fixed_rate_bps) {
        w.attr("dataRate", *st.fixed_rate_bps);
      } else {
        w.attr("dataRate", "snrTable");
      }
      w.close();
      w.open("Mac");
      w.attr("type", st.mac_type);
      w.close();
      w.open("Net");
      w.attr("address", format_ipv4(st.network));
      w.attr("mask", format_ipv4(st.mask));
      w.close();
    } else {
      w.open("Net");
      w.attr("address", format_ipv4(kBusNetwork));
      w.attr("mask", format_ipv4(kBusMask));
      w.close();
    }
    if (!d.attachments.empty()) {
      w.open("Attachments");
      for (const auto& a : d.attachments) {
        w.open("Attachment");
        w.attr("time", a.time);
        if (a.access) w.attr("access", *a.access);
        w.close();
      }
      w.close();
    }
    w.open("Packets");
    w.attr("count", d.records.size());
    for (const auto& r : d.records) {
      const Packet& p = *r.packet;
      w.open("Packet");
      w.attr("time", r.time);
      w.attr("dir", r.tx ? "tx" : "rx");
      w.attr("length", p.size());
      w.attr("proto", to_string(p.proto));
      w.attr("src", format_ipv4(p.src));
      w.attr("sport", p.sport);
      w.attr("dst", format_ipv4(p.dst));
      w.attr("dport", p.dport);
      w.attr("uid", p.uid);
      w.attr("origin", p.origin);
      w.attr("app", p.app);
      w.attr("created", p.created_at);
      if (r.rx_power_dbm) w.attr("rxPower", *r.rx_power_dbm);
      w.text(payload_text(p.payload));
      w.close();
    }
    w.close();
    w.close();
  }
  w.close();
}

void applications(XmlWriter& w, const Simulation& sim, std::size_t gid) {
  w.open("Applications");
  for (const Application* a : sim.applications_of(gid)) {
    w.open("Application");
    w.attr("id", a->id());
    w.attr("type", a->type());
    w.attr("start", a->start_time());
    w.attr("stop", a->stop_time());
    for (const auto& e : a->log()) {
      w.open("Event");
      w.attr("time", e.time);
      w.attr("kind", e.kind);
      w.attr("sn", e.sn);
      w.attr("bytes", e.bytes);
      if (e.peer_node) w.attr("peerNode", *e.peer_node);
      if (e.peer_app) w.attr("peerApp", *e.peer_app);
      if (e.created) w.attr("created", *e.created);
      if (!e.detail.empty()) w.attr("detail", e.detail);
      w.close();
    }
    w.close();
  }
  w.close();
}

void drone_element(XmlWriter& w, const Simulation& sim, const Drone& d, Seconds end) {
  const std::size_t i = d.index();
  w.open("Drone");
  w.attr("id", i);
  w.attr("host", d.global_id() + 1);
  if (d.depleted_at()) w.attr("depletedAt", *d.depleted_at());
  net_devices(w, sim, d.global_id());

  w.open("trajectory");
  for (const auto& p : sim.trajectory(i)) {
    w.open("point");
    w.attr("t", p.time);
    w.attr("x", p.position.x);
    w.attr("y", p.position.y);
    w.attr("z", p.position.z);
    w.close();
  }
  w.close();

  w.open("Peripherals");
  for (const auto& p : d.peripherals()) {
    w.open("Peripheral");
    w.attr("kind", p->kind());
    w.attr("state", to_string(p->state()));
    w.attr("powerOff", p->power_by_state()[0]);
    w.attr("powerIdle", p->power_by_state()[1]);
    w.attr("powerOn", p->power_by_state()[2]);
    if (!p->roi_trigger().empty()) w.attr("roiTrigger", fmt::format("{}", fmt::join(p->roi_trigger(), " ")));
    if (const auto* in = dynamic_cast<const InputPeripheral*>(p.get())) {
      w.attr("acquiredBits", in->acquired_bits());
      w.attr("droppedSamples", in->dropped_samples());
    }
    if (const auto* st = dynamic_cast<const StoragePeripheral*>(p.get())) {
      w.attr("capacity", st->capacity());
      w.attr("occupied", st->occupied());
    }
    w.close();
  }
  w.close();

  const EnergyModel& em = sim.energy(i);
  w.open("Energy");
  w.attr("initial", em.source().initial());
  w.attr("remaining", em.source().remaining());
  w.attr("samplingInterval", em.source().sampling_interval());
  for (const auto& s : em.samples()) {
    if (s.time > end + kTimeResolution) break;
    w.open("sample");
    w.attr("t", s.time);
    w.attr("level", s.power.level);
    w.attr("vertical", s.power.vertical);
    w.attr("drag", s.power.drag);
    w.attr("peripherals", s.power.peripherals);
    w.attr("radio", s.power.radio);
    w.attr("total", s.power.total);
    w.attr("remaining", s.remaining);
    w.close();
  }
  w.close();

  if (const StoragePeripheral* st = d.storage()) {
    w.open("Storage");
    w.attr("capacity", st->capacity());
    for (const auto& s : sim.storage_samples(i)) {
      w.open("sample");
      w.attr("t", s.time);
      w.attr("occupied", s.occupied);
      w.close();
    }
    w.close();
  }
  applications(w, sim, d.global_id());
  w.close();
}

void stream_xml(std::ostream& out, const Simulation& sim, const std::string& executed_at) {
  const auto& cfg = sim.config();
  XmlWriter w(out);
  w.open("Simulation");
  w.attr("scenario", cfg.name);
  w.attr("executedAt", executed_at);
  w.attr("seed", cfg.seed);

  const auto& stats = sim.stats();
  w.open("duration");
  w.attr("virtual", stats ? stats->virtual_seconds : 0.0);
  if (cfg.static_config.report_wall_clock && stats) w.attr("real", stats->wall_seconds);
  w.close();

  w.open("World");
  w.open("Buildings");
  for (const auto& b : sim.world().buildings()) {
    w.open("Building");
    w.attr("type", to_string(b.type));
    w.attr("walls", to_string(b.walls));
    w.attr("floors", b.floors);
    w.attr("roomsX", b.rooms_x);
    w.attr("roomsY", b.rooms_y);
    w.attr("boundaries", box_text(b.bounds));
    w.close();
  }
  w.close();
  w.open("InterestRegions");
  for (std::size_t i = 0; i < sim.world().region_count(); ++i) {
    w.open("Region");
    w.attr("id", i);
    w.attr("boundaries", box_text(sim.world().get_region_coordinates(i)));
    w.close();
  }
  w.close();
  w.close();

  w.open("Zsps");
  for (const auto& z : sim.zsps()) {
    w.open("Zsp");
    w.attr("id", z->index());
    w.attr("host", z->global_id() + 1);
    position(w, "position", z->position(0.0));
    net_devices(w, sim, z->global_id());
    applications(w, sim, z->global_id());
    w.close();
  }
  w.close();

  const Seconds end = stats ? stats->virtual_seconds : 0.0;
  w.open("Drones");
  for (const auto& d : sim.drones()) drone_element(w, sim, *d, end);
  w.close();

  w.open("Remotes");
  for (const auto& r : sim.remotes()) {
    w.open("Remote");
    w.attr("id", r->index());
    w.attr("host", r->global_id() + 1);
    net_devices(w, sim, r->global_id());
    applications(w, sim, r->global_id());
    w.close();
  }
  w.close();

  w.open("Statistics");
  w.attr("events", stats ? stats->events_processed : 0);
  if (stats) {
    for (std::size_t k = 0; k < stats->events_per_interval.size(); ++k) {
      w.open("interval");
      w.attr("index", k);
      w.attr("events", stats->events_per_interval[k]);
      w.close();
    }
  }
  w.open("Links");
  for (const auto& [pair, ls] : sim.network().link_stats()) {
    w.open("Link");
    w.attr("from", pair.first);
    w.attr("to", pair.second);
    w.attr("sent", ls.sent);
    w.attr("delivered", ls.delivered);
    w.attr("dropped", ls.total_dropped());
    // Packets still serializing or propagating when the horizon hit.
    w.attr("inFlight", ls.sent - ls.delivered - ls.total_dropped());
    w.close();
  }
  w.close();
  w.open("Drops");
  const auto all = sim.network().drops();
  for (std::size_t k = 0; k < all.size(); ++k) {
    w.open("Drop");
    w.attr("reason", to_string(static_cast<DropReason>(k)));
    w.attr("count", all[k]);
    w.close();
  }
  w.close();
  w.close();
  w.close();
}

std::string fmt_time(Seconds t) { return fmt::format("{:.9f}", t); }

}  // namespace

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string render_xml(const Simulation& sim, const std::string& executed_at) {
  std::ostringstream out;
  stream_xml(out, sim, executed_at);
  return out.str();
}

void write_xml(const Simulation& sim, const std::string& path, const std::string& executed_at) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SimError(Errc::io_error, "cannot write " + path);
  stream_xml(out, sim, executed_at);
  out.flush();
  if (!out) throw SimError(Errc::io_error, "short write on " + path);
}

std::string trace_filename(const std::string& layer, std::size_t host, std::size_t dev) {
  return fmt::format("{}-{}-{}.tr", layer, host, dev);
}

std::string trace_line(const PacketRecord& r) {
  const Packet& p = *r.packet;
  std::string line = fmt::format("{} {} {} {}:{} > {}:{} len={} uid={}", r.tx ? 't' : 'r',
                                 fmt_time(r.time), to_string(p.proto), format_ipv4(p.src),
                                 p.sport, format_ipv4(p.dst), p.dport, p.size(), p.uid);
  if (r.rx_power_dbm) line += fmt::format(" rx={:.3f}", *r.rx_power_dbm);
  return line;
}

std::vector<std::string> write_results(const Simulation& sim, const std::string& dir,
                                       const std::string& executed_at) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw SimError(Errc::io_error, "cannot create " + dir + ": " + ec.message());

  std::vector<std::string> files;
  write_xml(sim, (fs::path(dir) / kReportFile).string(), executed_at);
  files.emplace_back(kReportFile);

  const Network& net = sim.network();
  for (const NetDevice& d : net.devices()) {
    if (d.records.empty()) continue;
    std::vector<const PacketRecord*> recs;
    for (const auto& r : d.records) recs.push_back(&r);
    std::stable_sort(recs.begin(), recs.end(),
                     [](const PacketRecord* a, const PacketRecord* b) { return a->time < b->time; });

    const std::string stem = trace_filename(d.layer, d.node + 1, d.local);
    std::ofstream tr(fs::path(dir) / stem, std::ios::binary | std::ios::trunc);
    if (!tr) throw SimError(Errc::io_error, "cannot write " + stem);
    std::vector<PcapFrame> frames;
    for (const auto* r : recs) {
      tr << trace_line(*r) << '\n';
      frames.push_back({r->time, ipv4_datagram(*r->packet)});
    }
    files.push_back(stem);

    const std::string pcap = stem.substr(0, stem.size() - 3) + ".pcap";
    write_pcap((fs::path(dir) / pcap).string(), frames);
    files.push_back(pcap);
  }
  return files;
}

// ---- progress log ---------------------------------------------------------------------------

void ProgressLog::emit(const std::string& line) {
  for (auto* s : sinks_) *s << line << '\n' << std::flush;
}

void ProgressLog::start(const std::string& scenario) {
  started_ = std::chrono::steady_clock::now();
  emit(fmt::format("Simulation '{}' started at {}", scenario,
                   iso8601_utc(std::chrono::system_clock::now())));
}

std::string ProgressLog::format_line(const IntervalReport& r) {
  const Seconds span = r.virtual_end - static_cast<double>(r.index);
  const double speedup = r.wall_seconds > 0 ? span / r.wall_seconds : 0.0;
  return fmt::format("[{:.3f} s] speedup {:.3f} events {}", r.virtual_end, speedup, r.events);
}

void ProgressLog::interval(const IntervalReport& r) { emit(format_line(r)); }

void ProgressLog::finish(const RunStats& stats) {
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  emit(fmt::format("Simulation finished at {} ({} events)",
                   iso8601_utc(std::chrono::system_clock::now()), stats.events_processed));
  emit(fmt::format("Elapsed wall clock: {:.3f} s", wall));
}

}  // namespace iodsim
