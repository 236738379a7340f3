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
#include "iodsim/analysis.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <expat.h>
#include <fmt/format.h>

#include "iodsim/error.hpp"
#include "iodsim/report.hpp"

namespace iodsim {

namespace {

// Attribute lookup over expat's null-terminated name/value array.
class Attrs {
 public:
  explicit Attrs(const XML_Char** a) : a_(a) {}

  const char* find(std::string_view key) const {
    for (const XML_Char** p = a_; *p != nullptr; p += 2) {
      if (key == p[0]) return p[1];
    }
    return nullptr;
  }
  std::string str(std::string_view key) const {
    const char* v = find(key);
    if (v == nullptr) throw SimError(Errc::io_error, fmt::format("missing attribute {}", key));
    return v;
  }
  template <class T>
  T get(std::string_view key) const {
    return parse<T>(str(key));
  }
  template <class T>
  std::optional<T> opt(std::string_view key) const {
    const char* v = find(key);
    if (v == nullptr) return std::nullopt;
    return parse<T>(v);
  }

 private:
  template <class T>
  static T parse(const std::string& s) {
    T out{};
    std::istringstream in(s);
    in >> out;
    if (in.fail()) throw SimError(Errc::io_error, "bad attribute value '" + s + "'");
    return out;
  }

  const XML_Char** a_;
};

struct Host {
  std::string kind;  ///< drone, zsp or remote
  std::size_t index = 0;
};

// Application-level deliveries: every rx event logged by a receiving app.
struct Delivery {
  std::size_t receiver = 0;
  std::size_t origin = 0;
  std::uint32_t app = 0;
  std::uint32_t sn = 0;
  std::uint64_t bytes = 0;
  Seconds time = 0.0;
  std::optional<Seconds> created;
};

struct AppSummary {
  std::uint32_t id = 0;
  std::string type;
  std::set<std::uint32_t> sent;
};

struct RxSample {
  std::size_t origin = 0;
  std::string time;
  std::string rx;
};

struct Interval {
  std::size_t index = 0;
  std::string events;
};

// Everything one pass over report.xml can collect. Only the parts a KPI
// needs are kept, so large reports stay cheap to analyze.
struct Report {
  explicit Report(Kpi k) : kpi(k) {}

  Kpi kpi;
  Seconds duration = 0.0;
  std::map<std::size_t, Host> hosts;  ///< by global id (host - 1)
  std::map<std::size_t, std::vector<std::string>> rows;  ///< pre-rendered rows per host
  std::map<std::size_t, std::vector<RxSample>> zsp_rx;
  std::map<std::size_t, std::vector<Delivery>> deliveries;
  std::map<std::size_t, std::vector<AppSummary>> apps;
  std::vector<Interval> intervals;

  // parser state
  std::vector<std::string> path;
  std::optional<std::size_t> host;
  std::string storage_capacity;
  bool root_seen = false;

  bool wants_deliveries() const {
    return kpi == Kpi::throughput || kpi == Kpi::latency || kpi == Kpi::plr;
  }
  bool in(std::string_view parent) const {
    return path.size() >= 2 && path[path.size() - 2] == parent;
  }

  void start(const std::string& name, const Attrs& a) {
    path.push_back(name);
    if (path.size() == 1) {
      root_seen = name == "Simulation";
    } else if (name == "duration" && path.size() == 2) {
      duration = a.get<double>("virtual");
    } else if ((name == "Drone" || name == "Zsp" || name == "Remote") && path.size() == 3) {
      const auto gid = a.get<std::size_t>("host") - 1;
      std::string kind = name == "Drone" ? "drone" : name == "Zsp" ? "zsp" : "remote";
      hosts[gid] = {std::move(kind), a.get<std::size_t>("id")};
      host = gid;
    } else if (!host) {
      if (name == "interval" && in("Statistics")) {
        intervals.push_back({a.get<std::size_t>("index"), a.str("events")});
      }
    } else if (name == "sample" && in("Energy") && kpi == Kpi::power) {
      rows[*host].push_back(fmt::format("{},{},{},{},{},{},{},{},{}", hosts[*host].index,
                                        a.str("t"), a.str("level"), a.str("vertical"),
                                        a.str("drag"), a.str("peripherals"), a.str("radio"),
                                        a.str("total"), a.str("remaining")));
    } else if (name == "Storage" && kpi == Kpi::storage) {
      storage_capacity = a.str("capacity");
    } else if (name == "sample" && in("Storage") && kpi == Kpi::storage) {
      rows[*host].push_back(fmt::format("{},{},{},{}", hosts[*host].index, a.str("t"),
                                        a.str("occupied"), storage_capacity));
    } else if (name == "Packet" && kpi == Kpi::rssi && hosts[*host].kind == "zsp") {
      const char* rx = a.find("rxPower");
      if (rx != nullptr && a.str("dir") == "rx") {
        zsp_rx[*host].push_back({a.get<std::size_t>("origin"), a.str("time"), rx});
      }
    } else if (name == "Application" && (wants_deliveries())) {
      apps[*host].push_back({a.get<std::uint32_t>("id"), a.str("type"), {}});
    } else if (name == "Event" && wants_deliveries()) {
      const std::string kind = a.str("kind");
      if (kind == "tx") {
        apps[*host].back().sent.insert(a.get<std::uint32_t>("sn"));
      } else if (kind == "rx") {
        if (auto peer = a.opt<std::size_t>("peerNode")) {
          deliveries[*host].push_back({*host, *peer, a.opt<std::uint32_t>("peerApp").value_or(0),
                                       a.get<std::uint32_t>("sn"), a.get<std::uint64_t>("bytes"),
                                       a.get<double>("time"), a.opt<double>("created")});
        }
      }
    }
  }

  void end() {
    if (path.size() == 3 && host) host.reset();
    path.pop_back();
  }

  std::vector<Delivery> all_deliveries() const {
    std::vector<Delivery> out;
    for (const auto& [gid, v] : deliveries) out.insert(out.end(), v.begin(), v.end());
    return out;
  }
};

class ExpatParser {
 public:
  ExpatParser() : p_(XML_ParserCreate("UTF-8")) {
    if (p_ == nullptr) throw SimError(Errc::io_error, "cannot create XML parser");
  }
  ~ExpatParser() { XML_ParserFree(p_); }
  ExpatParser(const ExpatParser&) = delete;
  ExpatParser& operator=(const ExpatParser&) = delete;
  XML_Parser get() const { return p_; }

 private:
  XML_Parser p_;
};

struct ParseContext {
  Report* report = nullptr;
  std::string error;
};

void on_start(void* user, const XML_Char* name, const XML_Char** atts) {
  auto* ctx = static_cast<ParseContext*>(user);
  if (!ctx->error.empty()) return;
  try {
    ctx->report->start(name, Attrs(atts));
  } catch (const SimError& e) {
    ctx->error = e.what();
    ctx->report->path.emplace_back(name);
  }
}

void on_end(void* user, const XML_Char*) { static_cast<ParseContext*>(user)->report->end(); }

void load(const std::string& dir, Report& r) {
  const auto path = std::filesystem::path(dir) / kReportFile;
  if (!std::filesystem::exists(path)) {
    throw SimError(Errc::missing_artifact, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimError(Errc::io_error, "cannot read " + path.string());

  ExpatParser parser;
  ParseContext ctx{&r, {}};
  XML_SetUserData(parser.get(), &ctx);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  std::vector<char> buf(1 << 16);
  for (;;) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto n = static_cast<int>(in.gcount());
    const bool last = n == 0 || in.eof();
    if (XML_Parse(parser.get(), buf.data(), n, last) == XML_STATUS_ERROR) {
      throw SimError(Errc::io_error,
                     fmt::format("unreadable report: line {}: {}",
                                 XML_GetCurrentLineNumber(parser.get()),
                                 XML_ErrorString(XML_GetErrorCode(parser.get()))));
    }
    if (!ctx.error.empty()) throw SimError(Errc::io_error, "unreadable report: " + ctx.error);
    if (last) break;
  }
  if (!r.root_seen) {
    throw SimError(Errc::io_error, "report has no Simulation element");
  }
}

std::string num(double v) { return fmt::format("{}", v); }

std::string host_rows(const Report& r) {
  std::string out;
  for (const auto& [gid, v] : r.rows) {
    for (const auto& row : v) {
      out += row;
      out += '\n';
    }
  }
  return out;
}

std::string rssi_csv(const Report& r) {
  std::string out;
  for (const auto& [gid, v] : r.zsp_rx) {
    const std::size_t zsp = r.hosts.at(gid).index;
    for (const auto& s : v) {
      auto it = r.hosts.find(s.origin);
      if (it == r.hosts.end() || it->second.kind != "drone") continue;
      out += fmt::format("{},{},{},{}\n", it->second.index, zsp, s.time, s.rx);
    }
  }
  return out;
}

std::string throughput_csv(const Report& r, Seconds window) {
  if (!(window > 0)) throw SimError(Errc::validation_error, "window must be > 0 s");
  const auto nwin = static_cast<std::size_t>(
      std::max(1.0, std::ceil(r.duration / window - 1e-9)));
  std::map<std::size_t, std::vector<std::uint64_t>> bits;  // drone index -> per window
  for (const auto& d : r.all_deliveries()) {
    auto it = r.hosts.find(d.origin);
    if (it == r.hosts.end() || it->second.kind != "drone") continue;
    auto& v = bits[it->second.index];
    v.resize(nwin, 0);
    const auto k = std::min(nwin - 1, static_cast<std::size_t>(d.time / window));
    v[k] += d.bytes * 8;
  }
  std::string out;
  for (const auto& [drone, v] : bits) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      const Seconds a = static_cast<double>(k) * window;
      const Seconds b = std::min(r.duration, a + window);
      const double bps = b > a ? static_cast<double>(v[k]) / (b - a) : 0.0;
      out += fmt::format("{},{},{},{},{}\n", drone, num(a), num(b), v[k], num(bps));
    }
  }
  return out;
}

std::string latency_csv(const Report& r) {
  std::string out;
  for (const auto& d : r.all_deliveries()) {
    if (!d.created) continue;
    out += fmt::format("{},{},{},{},{},{},{}\n", d.receiver + 1, d.origin + 1, d.app, d.sn,
                       num(*d.created), num(d.time), num(d.time - *d.created));
  }
  return out;
}

std::string plr_csv(const Report& r) {
  std::set<std::tuple<std::size_t, std::uint32_t, std::uint32_t>> got;
  for (const auto& d : r.all_deliveries()) got.insert({d.origin, d.app, d.sn});
  std::string out;
  for (const auto& [gid, list] : r.apps) {
    for (const auto& a : list) {
      if (a.sent.empty()) continue;
      std::size_t delivered = 0;
      for (auto sn : a.sent) delivered += got.count({gid, a.id, sn});
      const double plr = 1.0 - static_cast<double>(delivered) / static_cast<double>(a.sent.size());
      out += fmt::format("{},{},{},{},{},{}\n", gid + 1, a.id, a.type, a.sent.size(), delivered,
                         num(plr));
    }
  }
  return out;
}

std::string perf_csv(const Report& r, const std::string& dir) {
  // Speedup comes from the progress log when it was written.
  std::map<std::size_t, std::string> speedup;
  std::ifstream in(std::filesystem::path(dir) / kProgressFile);
  const std::regex line(R"(^\[([0-9.]+) s\] speedup ([0-9.eE+-]+) events ([0-9]+)$)");
  std::string s;
  std::size_t k = 0;
  while (in && std::getline(in, s)) {
    std::smatch m;
    if (std::regex_match(s, m, line)) speedup[k++] = m[2];
  }
  std::string out;
  for (const auto& iv : r.intervals) {
    const double end = std::min(r.duration, static_cast<double>(iv.index + 1));
    auto it = speedup.find(iv.index);
    out += fmt::format("{},{},{},{}\n", iv.index, num(end), iv.events,
                       it == speedup.end() ? "" : it->second);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& kpi_names() {
  static const std::vector<std::string> names{"power",   "rssi", "throughput", "storage",
                                              "latency", "plr",  "perf"};
  return names;
}

std::optional<Kpi> parse_kpi(std::string_view name) {
  const auto& n = kpi_names();
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == name) return static_cast<Kpi>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Kpi k) { return kpi_names().at(static_cast<std::size_t>(k)); }

std::string_view csv_header(Kpi k) {
  switch (k) {
    case Kpi::power: return "drone,time,level,vertical,drag,peripherals,radio,total,remaining";
    case Kpi::rssi: return "drone,zsp,time,rx_dbm";
    case Kpi::throughput: return "drone,window_start,window_end,bits,bps";
    case Kpi::storage: return "drone,time,occupied_bits,capacity_bits";
    case Kpi::latency: return "receiver_host,origin_host,app,sn,created,received,latency";
    case Kpi::plr: return "host,app,type,sent,delivered,plr";
    case Kpi::perf: return "interval,virtual_end,events,speedup";
  }
  return "";
}

std::string analyze(const std::string& dir, Kpi k, const AnalyzeOptions& opts) {
  if (k == Kpi::throughput && !(opts.window > 0)) {
    throw SimError(Errc::validation_error, "window must be > 0 s");
  }
  Report r(k);
  load(dir, r);
  std::string body;
  switch (k) {
    case Kpi::power: body = host_rows(r); break;
    case Kpi::rssi: body = rssi_csv(r); break;
    case Kpi::throughput: body = throughput_csv(r, opts.window); break;
    case Kpi::storage: body = host_rows(r); break;
    case Kpi::latency: body = latency_csv(r); break;
    case Kpi::plr: body = plr_csv(r); break;
    case Kpi::perf: body = perf_csv(r, dir); break;
  }
  return std::string(csv_header(k)) + "\n" + body;
}

}  // namespace iodsim
