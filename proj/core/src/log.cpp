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
#include "iodsim/log.hpp"

#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/spdlog.h>

#include "iodsim/error.hpp"

namespace iodsim {

struct DebugLog::Impl {
  std::shared_ptr<spdlog::logger> logger;
};

DebugLog::DebugLog(const std::vector<std::string>& components, const std::string& path)
    : impl_(std::make_unique<Impl>()) {
  for (const auto& c : components) {
    if (c == "all") all_ = true;
    components_.insert(c);
  }
  try {
    auto sink = std::make_shared<spdlog::sinks::basic_file_sink_st>(path, true);
    impl_->logger = std::make_shared<spdlog::logger>("iodsim", std::move(sink));
  } catch (const spdlog::spdlog_ex& e) {
    throw SimError(Errc::io_error, std::string("cannot open debug log: ") + e.what());
  }
  // Timestamps come from virtual time, so the wall-clock prefix is dropped.
  impl_->logger->set_pattern("%v");
  impl_->logger->set_level(spdlog::level::debug);
}

DebugLog::~DebugLog() {
  if (impl_ && impl_->logger) impl_->logger->flush();
}

bool DebugLog::enabled(std::string_view component) const {
  return all_ || components_.find(component) != components_.end();
}

void DebugLog::write(std::string_view component, Seconds t, std::string_view message) {
  if (!enabled(component)) return;
  impl_->logger->debug("{:.9f} [{}] {}", t, component, message);
}

void DebugLog::flush() { impl_->logger->flush(); }

}  // namespace iodsim
