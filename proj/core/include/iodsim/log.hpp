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

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "iodsim/geometry.hpp"

namespace iodsim {

/// Component-gated debug log. Only components listed at construction are
/// written; "all" enables every component.
class DebugLog {
 public:
  /// Throws IoError when the file cannot be opened.
  DebugLog(const std::vector<std::string>& components, const std::string& path);
  ~DebugLog();
  DebugLog(const DebugLog&) = delete;
  DebugLog& operator=(const DebugLog&) = delete;

  bool enabled(std::string_view component) const;
  void write(std::string_view component, Seconds t, std::string_view message);
  void flush();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::set<std::string, std::less<>> components_;
  bool all_ = false;
};

}  // namespace iodsim
