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
#include <functional>
#include <queue>
#include <random>
#include <unordered_map>
#include <vector>

#include "iodsim/geometry.hpp"

namespace iodsim {

using EventId = std::uint64_t;

/// Virtual time resolution. Fire times are rounded to this grid, so two
/// events scheduled less than one nanosecond apart are equal-time and
/// dispatch in insertion order.
inline constexpr double kTimeResolution = 1e-9;

struct RunStats {
  std::uint64_t events_processed = 0;
  double wall_seconds = 0.0;
  Seconds virtual_seconds = 0.0;
  /// Events dispatched in each virtual second [k, k+1).
  std::vector<std::uint64_t> events_per_interval;
};

/// Snapshot handed to the progress observer when a virtual second closes.
struct IntervalReport {
  std::size_t index = 0;         ///< interval k covers [k, k+1)
  Seconds virtual_end = 0.0;     ///< k + 1, clamped to the run duration
  std::uint64_t events = 0;      ///< events dispatched in the interval
  double wall_seconds = 0.0;     ///< wall time spent on the interval
};

/// Deterministic single-threaded discrete-event scheduler.
///
/// Events are ordered by (fire time on the nanosecond grid, insertion
/// counter). The engine also owns the run's only pseudo-random source.
class Engine {
 public:
  using Action = std::function<void()>;
  using ProgressObserver = std::function<void(const IntervalReport&)>;

  explicit Engine(std::uint64_t seed = 1);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Enqueue `action` at now() + delay.
  EventId schedule(Seconds delay, Action action);

  /// Returns true iff the event was pending; a cancelled event never runs.
  bool cancel(EventId id);

  /// Dispatch events with fire time <= duration, then close the run.
  RunStats run(Seconds duration);

  Seconds now() const { return static_cast<double>(now_ticks_) * kTimeResolution; }
  bool running() const { return running_; }
  bool finished() const { return finished_; }
  std::size_t pending() const { return actions_.size(); }

  std::mt19937_64& rng() { return rng_; }
  std::uint64_t seed() const { return seed_; }

  void set_progress_observer(ProgressObserver observer) { observer_ = std::move(observer); }

 private:
  struct Entry {
    std::int64_t tick;
    EventId seq;
    bool operator>(const Entry& o) const {
      return tick != o.tick ? tick > o.tick : seq > o.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
  std::unordered_map<EventId, Action> actions_;
  EventId next_id_ = 0;
  std::int64_t now_ticks_ = 0;
  bool running_ = false;
  bool finished_ = false;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  ProgressObserver observer_;
};

}  // namespace iodsim
