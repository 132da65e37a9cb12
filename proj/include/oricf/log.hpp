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

#pragma once

#include <string_view>

namespace oricf {

enum class LogLevel : int { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

/// Minimum level actually written. Initialized from ORICF_LOG
/// (debug|info|warn|error|off) on first use; defaults to info.
LogLevel log_threshold();
void set_log_threshold(LogLevel level);

/// Writes "[level] message" to stderr (stdout stays machine-readable).
void log_line(LogLevel level, std::string_view message);

inline void log_debug(std::string_view m) { log_line(LogLevel::Debug, m); }
inline void log_info(std::string_view m) { log_line(LogLevel::Info, m); }
inline void log_warn(std::string_view m) { log_line(LogLevel::Warn, m); }
inline void log_error(std::string_view m) { log_line(LogLevel::Error, m); }

}  // namespace oricf
