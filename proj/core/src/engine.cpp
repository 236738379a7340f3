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
#include "iodsim/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "iodsim/error.hpp"

namespace iodsim {

namespace {

constexpr std::int64_t kTicksPerSecond = 1'000'000'000;

std::int64_t to_ticks(double seconds) { return std::llround(seconds * kTicksPerSecond); }

}  // namespace

Engine::Engine(std::uint64_t seed) : seed_(seed), rng_(seed) {}

EventId Engine::schedule(Seconds delay, Action action) {
  if (finished_) {
    throw SimError(Errc::engine_finished, "cannot schedule after the run completed");
  }
  if (!std::isfinite(delay) || delay < 0.0) {
    throw SimError(Errc::negative_delay, "delay must be finite and non-negative");
  }
  const EventId id = next_id_++;
  queue_.push(Entry{now_ticks_ + to_ticks(delay), id});
  actions_.emplace(id, std::move(action));
  return id;
}

bool Engine::cancel(EventId id) { return actions_.erase(id) > 0; }

RunStats Engine::run(Seconds duration) {
  if (running_) {
    throw SimError(Errc::reentrant_run, "run() called from inside an event");
  }
  if (finished_) {
    throw SimError(Errc::engine_finished, "run() already completed");
  }
  if (!std::isfinite(duration) || duration < 0.0) {
    throw SimError(Errc::negative_delay, "run duration must be finite and non-negative");
  }
  running_ = true;

  using Clock = std::chrono::steady_clock;
  const auto wall_start = Clock::now();
  auto interval_start = wall_start;

  const std::int64_t end_tick = to_ticks(duration);
  const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(duration)));

  RunStats stats;
  stats.events_per_interval.assign(intervals, 0);
  std::size_t open_interval = 0;

  auto close_through = [&](std::size_t last) {
    for (; open_interval < last && open_interval < intervals; ++open_interval) {
      const auto t = Clock::now();
      if (observer_) {
        IntervalReport report;
        report.index = open_interval;
        report.virtual_end = std::min(duration, static_cast<double>(open_interval + 1));
        report.events = stats.events_per_interval[open_interval];
        report.wall_seconds = std::chrono::duration<double>(t - interval_start).count();
        observer_(report);
      }
      interval_start = t;
    }
  };

  try {
    while (!queue_.empty()) {
      const Entry top = queue_.top();
      if (top.tick > end_tick) break;
      queue_.pop();
      auto it = actions_.find(top.seq);
      if (it == actions_.end()) continue;  // cancelled
      Action action = std::move(it->second);
      actions_.erase(it);

      now_ticks_ = top.tick;
      const auto bucket =
          std::min(static_cast<std::size_t>(top.tick / kTicksPerSecond), intervals - 1);
      close_through(bucket);
      ++stats.events_per_interval[bucket];
      ++stats.events_processed;
      action();
    }
  } catch (...) {
    running_ = false;
    finished_ = true;
    throw;
  }

  now_ticks_ = end_tick;
  close_through(intervals);
  running_ = false;
  finished_ = true;

  stats.virtual_seconds = duration;
  stats.wall_seconds = std::chrono::duration<double>(Clock::now() - wall_start).count();
  return stats;
}

}  // namespace iodsim
