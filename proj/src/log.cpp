// Copyright 2026 The ORICF Authors.
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

#include "oricf/log.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>

namespace oricf {

namespace {

LogLevel parse_level(const char* text) {
  if (!text) return LogLevel::Info;
  if (std::strcmp(text, "debug") == 0) return LogLevel::Debug;
  if (std::strcmp(text, "info") == 0) return LogLevel::Info;
  if (std::strcmp(text, "warn") == 0) return LogLevel::Warn;
  if (std::strcmp(text, "error") == 0) return LogLevel::Error;
  if (std::strcmp(text, "off") == 0) return LogLevel::Off;
  return LogLevel::Info;
}

std::atomic<int>& threshold_storage() {
  static std::atomic<int> level{static_cast<int>(parse_level(std::getenv("ORICF_LOG")))};
  return level;
}

const char* level_name(LogLevel level) {
  switch (level) {
    case LogLevel::Debug: return "debug";
    case LogLevel::Info: return "info";
    case LogLevel::Warn: return "warn";
    case LogLevel::Error: return "error";
    case LogLevel::Off: return "off";
  }
  return "?";
}

}  // namespace

LogLevel log_threshold() { return static_cast<LogLevel>(threshold_storage().load()); }

void set_log_threshold(LogLevel level) { threshold_storage().store(static_cast<int>(level)); }

void log_line(LogLevel level, std::string_view message) {
  if (static_cast<int>(level) < threshold_storage().load()) return;
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::cerr << "[" << level_name(level) << "] " << message << "\n";
}

}  // namespace oricf
