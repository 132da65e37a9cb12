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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oricf/payload.hpp"

namespace oricf {

using Config = std::map<std::string, std::string>;

/// Static contract of one inference backend: what it consumes and
/// produces, and whether it may read latest values of context channels.
struct BackendDescriptor {
  std::string name;
  std::vector<PayloadKind> input_kinds;
  PayloadKind output_kind = PayloadKind::Text;
  bool context_channels_allowed = false;

  bool accepts_input(PayloadKind kind) const;
};

/// Descriptor table the spec validator checks node declarations against.
struct BackendCatalog {
  std::map<std::string, BackendDescriptor> backends;

  const BackendDescriptor* find(const std::string& name) const;
};

/// Validation-time view of one adapter: role, the channel kind it is
/// bound to (nullopt = any), and a parameter checker returning one
/// message per problem.
struct AdapterValidationInfo {
  bool source = false;
  bool sink = false;
  std::optional<PayloadKind> kind;
  std::function<std::vector<std::string>(const Config&)> validate_params;
};

struct AdapterCatalog {
  std::map<std::string, AdapterValidationInfo> adapters;

  const AdapterValidationInfo* find(const std::string& name) const;
};

/// Tolerant scan for `{chan:NAME}` references inside a string. Used to
/// derive context-channel edges from backend configs and format
/// templates without requiring the full template grammar.
std::vector<std::string> scan_context_channels(const std::string& text);

/// Union of `{chan:...}` references over all config values, deduplicated,
/// in first-appearance order.
std::vector<std::string> scan_context_channels(const Config& config);

}  // namespace oricf
