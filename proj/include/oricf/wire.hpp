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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oricf/byte_io.hpp"
#include "oricf/payload.hpp"

namespace oricf {

// Offload wire protocol, normatively documented in PROTOCOL.md.
// Frame: "ORCF" magic, version u8, msg_type u8, request_id u64 LE,
// payload_len u32 LE, then payload_len payload bytes.

inline constexpr uint8_t kWireVersion = 1;
inline constexpr uint32_t kMaxWirePayload = 64u * 1024 * 1024;  // 64 MiB
inline constexpr size_t kFrameHeaderSize = 18;
inline constexpr uint8_t kWireMagic[4] = {'O', 'R', 'C', 'F'};

enum class MsgType : uint8_t {
  LoadModel = 1,
  LoadOk = 2,
  Infer = 3,
  InferOk = 4,
  Error = 5,
  Ping = 6,
  Pong = 7,
};

enum class WireErrorCode : uint16_t {
  UnsupportedVersion = 1,
  UnknownModelHandle = 2,
  UnknownBackend = 3,
  MalformedPayload = 4,
  PayloadTooLarge = 5,
  BackendFailure = 6,
};

struct WireFrame {
  MsgType msg_type = MsgType::Ping;
  uint64_t request_id = 0;
  std::vector<uint8_t> payload;

  bool operator==(const WireFrame&) const = default;
};

struct LoadModelBody {
  std::string model_id;
  std::string backend;
  std::map<std::string, std::string> config;
  bool operator==(const LoadModelBody&) const = default;
};

struct InferBody {
  uint32_t handle = 0;
  std::vector<Payload> inputs;
  std::map<std::string, Payload> ctx;
  bool operator==(const InferBody&) const = default;
};

struct ErrorBody {
  WireErrorCode code = WireErrorCode::BackendFailure;
  std::string message;
  bool operator==(const ErrorBody&) const = default;
};

std::vector<uint8_t> encode_frame(const WireFrame& frame);

/// Decodes one frame from the head of `bytes`. Validates magic, version
/// and the payload length bound before touching payload bytes; never
/// reads past the span. `consumed`, when non-null, receives the number
/// of bytes the frame occupied.
WireFrame decode_frame(std::span<const uint8_t> bytes, size_t* consumed = nullptr);

void encode_payload(ByteWriter& w, const Payload& payload);
std::vector<uint8_t> encode_payload(const Payload& payload);
Payload decode_payload(ByteReader& r);

/// Decodes a payload that must occupy the whole buffer; trailing bytes
/// are a DecodeError.
Payload decode_payload_exact(std::span<const uint8_t> bytes);

std::vector<uint8_t> encode_load_model(const LoadModelBody& body);
LoadModelBody decode_load_model(std::span<const uint8_t> bytes);
std::vector<uint8_t> encode_load_ok(uint32_t handle);
uint32_t decode_load_ok(std::span<const uint8_t> bytes);
std::vector<uint8_t> encode_infer(const InferBody& body);
InferBody decode_infer(std::span<const uint8_t> bytes);
std::vector<uint8_t> encode_error(const ErrorBody& body);
ErrorBody decode_error(std::span<const uint8_t> bytes);

/// Canonical YAML rendering of a flat string map: keys ascending, one
/// `key: "value"` line each, values double-quoted with escapes. Used for
/// the LoadModel config block so identical configs encode identically.
std::string canonical_config_yaml(const std::map<std::string, std::string>& config);
std::map<std::string, std::string> parse_config_yaml(const std::string& text);

}  // namespace oricf
