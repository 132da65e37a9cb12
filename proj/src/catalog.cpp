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

#include "oricf/catalog.hpp"

#include <algorithm>

namespace oricf {

bool BackendDescriptor::accepts_input(PayloadKind kind) const {
  return std::find(input_kinds.begin(), input_kinds.end(), kind) != input_kinds.end();
}

const BackendDescriptor* BackendCatalog::find(const std::string& name) const {
  auto it = backends.find(name);
  return it == backends.end() ? nullptr : &it->second;
}

const AdapterValidationInfo* AdapterCatalog::find(const std::string& name) const {
  auto it = adapters.find(name);
  return it == adapters.end() ? nullptr : &it->second;
}

std::vector<std::string> scan_context_channels(const std::string& text) {
  std::vector<std::string> out;
  static const std::string kPrefix = "{chan:";
  size_t pos = 0;
  while (true) {
    size_t start = text.find(kPrefix, pos);
    if (start == std::string::npos) break;
    size_t end = text.find('}', start + kPrefix.size());
    if (end == std::string::npos) break;
    std::string name = text.substr(start + kPrefix.size(), end - start - kPrefix.size());
    if (!name.empty() && std::find(out.begin(), out.end(), name) == out.end()) {
      out.push_back(name);
    }
    pos = end + 1;
  }
  return out;
}

std::vector<std::string> scan_context_channels(const Config& config) {
  std::vector<std::string> out;
  for (const auto& [key, value] : config) {
    for (std::string& name : scan_context_channels(value)) {
      if (std::find(out.begin(), out.end(), name) == out.end()) {
        out.push_back(std::move(name));
      }
    }
  }
  return out;
}

}  // namespace oricf
