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

#include <string>
#include <vector>

#include "oricf/payload.hpp"

namespace oricf {

// JSON payload encoding used by the `file` adapter: one object per line,
// {"kind": ..., ...}; tensor data travels as base64 of the raw
// little-endian bytes. Documented bit-exactly in SCHEMA.md.

std::string payload_to_json_line(const Payload& payload);

/// Throws DecodeError on malformed input.
Payload payload_from_json_line(const std::string& line);

std::string base64_encode(std::span<const uint8_t> bytes);
std::vector<uint8_t> base64_decode(const std::string& text);

}  // namespace oricf
