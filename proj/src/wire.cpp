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

#include "oricf/wire.hpp"

#include <yaml-cpp/yaml.h>

#include <limits>

namespace oricf {

void ByteWriter::str16(std::string_view s) {
  if (s.size() > std::numeric_limits<uint16_t>::max()) {
    throw Error("string too long for u16 length prefix");
  }
  u16(static_cast<uint16_t>(s.size()));
  bytes({reinterpret_cast<const uint8_t*>(s.data()), s.size()});
}

void ByteWriter::str32(std::string_view s) {
  if (s.size() > std::numeric_limits<uint32_t>::max()) {
    throw Error("string too long for u32 length prefix");
  }
  u32(static_cast<uint32_t>(s.size()));
  bytes({reinterpret_cast<const uint8_t*>(s.data()), s.size()});
}

std::string ByteReader::str16() {
  uint16_t n = u16();
  auto b = bytes(n);
  return std::string(reinterpret_cast<const char*>(b.data()), b.size());
}

std::string ByteReader::str32() {
  uint32_t n = u32();
  auto b = bytes(n);
  return std::string(reinterpret_cast<const char*>(b.data()), b.size());
}

namespace {

bool valid_msg_type(uint8_t t) { return t >= 1 && t <= 7; }

constexpr uint8_t kKindTensor = 1;
constexpr uint8_t kKindText = 2;
constexpr uint8_t kKindAudio = 3;
constexpr uint8_t kKindDetections = 4;
constexpr uint8_t kKindScalar = 5;

}  // namespace

std::vector<uint8_t> encode_frame(const WireFrame& frame) {
  if (frame.payload.size() > kMaxWirePayload) {
    throw Error("frame payload exceeds 64 MiB cap");
  }
  ByteWriter w;
  w.bytes({kWireMagic, 4});
  w.u8(kWireVersion);
  w.u8(static_cast<uint8_t>(frame.msg_type));
  w.u64(frame.request_id);
  w.u32(static_cast<uint32_t>(frame.payload.size()));
  w.bytes(frame.payload);
  return w.take();
}

WireFrame decode_frame(std::span<const uint8_t> bytes, size_t* consumed) {
  ByteReader r(bytes);
  auto magic = r.bytes(4);
  if (std::memcmp(magic.data(), kWireMagic, 4) != 0) {
    throw DecodeError("bad magic");
  }
  uint8_t version = r.u8();
  if (version != kWireVersion) {
    throw DecodeError("unsupported protocol version " + std::to_string(version));
  }
  uint8_t type = r.u8();
  if (!valid_msg_type(type)) {
    throw DecodeError("unknown message type " + std::to_string(type));
  }
  WireFrame f;
  f.msg_type = static_cast<MsgType>(type);
  f.request_id = r.u64();
  uint32_t len = r.u32();
  if (len > kMaxWirePayload) {
    throw DecodeError("payload length exceeds 64 MiB cap");
  }
  auto body = r.bytes(len);
  f.payload.assign(body.begin(), body.end());
  if (consumed) *consumed = r.pos();
  return f;
}

void encode_payload(ByteWriter& w, const Payload& payload) {
  if (const auto* t = std::get_if<Tensor>(&payload)) {
    w.u8(kKindTensor);
    w.u8(static_cast<uint8_t>(t->dtype));
    if (t->shape.size() > 255) throw Error("tensor rank exceeds 255");
    w.u8(static_cast<uint8_t>(t->shape.size()));
    for (uint32_t d : t->shape) w.u32(d);
    w.bytes(t->data);
    return;
  }
  if (const auto* s = std::get_if<Text>(&payload)) {
    w.u8(kKindText);
    w.str32(s->value);
    return;
  }
  if (const auto* a = std::get_if<AudioChunk>(&payload)) {
    w.u8(kKindAudio);
    w.u32(a->sample_rate_hz);
    w.u32(static_cast<uint32_t>(a->samples.size()));
    for (int16_t v : a->samples) w.u16(static_cast<uint16_t>(v));
    return;
  }
  if (const auto* d = std::get_if<DetectionSet>(&payload)) {
    w.u8(kKindDetections);
    w.u32(static_cast<uint32_t>(d->items.size()));
    for (const Detection& det : d->items) {
      w.str16(det.label);
      w.f32(det.score);
      for (float v : det.bbox) w.f32(v);
    }
    return;
  }
  w.u8(kKindScalar);
  w.f64(std::get<Scalar>(payload).value);
}

std::vector<uint8_t> encode_payload(const Payload& payload) {
  ByteWriter w;
  encode_payload(w, payload);
  return w.take();
}

namespace {

// Decoded bytes must satisfy the same invariants encode requires.
Payload checked(Payload p) {
  if (auto problem = validate_payload(p)) {
    throw DecodeError("invalid payload: " + *problem);
  }
  return p;
}

}  // namespace

Payload decode_payload(ByteReader& r) {
  uint8_t kind = r.u8();
  switch (kind) {
    case kKindTensor: {
      Tensor t;
      uint8_t dtype = r.u8();
      if (dtype < 1 || dtype > 3) throw DecodeError("unknown tensor dtype " + std::to_string(dtype));
      t.dtype = static_cast<Dtype>(dtype);
      uint8_t rank = r.u8();
      t.shape.reserve(rank);
      uint64_t numel = 1;
      for (int i = 0; i < rank; ++i) {
        uint32_t d = r.u32();
        t.shape.push_back(d);
        numel *= d;
        if (numel > kMaxWirePayload) throw DecodeError("tensor element count implausibly large");
      }
      uint64_t nbytes = numel * dtype_size(t.dtype);
      if (nbytes > r.remaining()) throw DecodeError("truncated tensor data");
      auto b = r.bytes(static_cast<size_t>(nbytes));
      t.data.assign(b.begin(), b.end());
      return checked(std::move(t));
    }
    case kKindText: {
      Text s;
      s.value = r.str32();
      return s;
    }
    case kKindAudio: {
      AudioChunk a;
      a.sample_rate_hz = r.u32();
      uint32_t n = r.u32();
      if (static_cast<uint64_t>(n) * 2 > r.remaining()) throw DecodeError("truncated audio samples");
      a.samples.reserve(n);
      for (uint32_t i = 0; i < n; ++i) a.samples.push_back(static_cast<int16_t>(r.u16()));
      return checked(std::move(a));
    }
    case kKindDetections: {
      DetectionSet d;
      uint32_t n = r.u32();
      // Each item takes at least 2 (label len) + 5*4 bytes.
      if (static_cast<uint64_t>(n) * 22 > r.remaining()) throw DecodeError("truncated detection set");
      d.items.reserve(n);
      for (uint32_t i = 0; i < n; ++i) {
        Detection det;
        det.label = r.str16();
        det.score = r.f32();
        for (float& v : det.bbox) v = r.f32();
        d.items.push_back(std::move(det));
      }
      return checked(std::move(d));
    }
    case kKindScalar: {
      return Scalar{r.f64()};
    }
    default:
      throw DecodeError("unknown payload kind " + std::to_string(kind));
  }
}

Payload decode_payload_exact(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  Payload p = decode_payload(r);
  if (!r.done()) {
    throw DecodeError("trailing bytes after payload");
  }
  return p;
}

std::vector<uint8_t> encode_load_model(const LoadModelBody& body) {
  ByteWriter w;
  w.str16(body.model_id);
  w.str16(body.backend);
  w.str32(canonical_config_yaml(body.config));
  return w.take();
}

LoadModelBody decode_load_model(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  LoadModelBody body;
  body.model_id = r.str16();
  body.backend = r.str16();
  std::string config_yaml = r.str32();
  if (!r.done()) throw DecodeError("trailing bytes after LoadModel body");
  body.config = parse_config_yaml(config_yaml);
  return body;
}

std::vector<uint8_t> encode_load_ok(uint32_t handle) {
  ByteWriter w;
  w.u32(handle);
  return w.take();
}

uint32_t decode_load_ok(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  uint32_t h = r.u32();
  if (!r.done()) throw DecodeError("trailing bytes after LoadOk body");
  return h;
}

std::vector<uint8_t> encode_infer(const InferBody& body) {
  if (body.inputs.size() > 255) throw Error("too many inputs in Infer");
  if (body.ctx.size() > std::numeric_limits<uint16_t>::max()) {
    throw Error("too many context entries in Infer");
  }
  ByteWriter w;
  w.u32(body.handle);
  w.u8(static_cast<uint8_t>(body.inputs.size()));
  for (const Payload& p : body.inputs) encode_payload(w, p);
  w.u16(static_cast<uint16_t>(body.ctx.size()));
  for (const auto& [name, payload] : body.ctx) {
    w.str16(name);
    encode_payload(w, payload);
  }
  return w.take();
}

InferBody decode_infer(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  InferBody body;
  body.handle = r.u32();
  uint8_t n_inputs = r.u8();
  body.inputs.reserve(n_inputs);
  for (int i = 0; i < n_inputs; ++i) body.inputs.push_back(decode_payload(r));
  uint16_t n_ctx = r.u16();
  for (int i = 0; i < n_ctx; ++i) {
    std::string name = r.str16();
    body.ctx.emplace(std::move(name), decode_payload(r));
  }
  if (!r.done()) throw DecodeError("trailing bytes after Infer body");
  return body;
}

std::vector<uint8_t> encode_error(const ErrorBody& body) {
  ByteWriter w;
  w.u16(static_cast<uint16_t>(body.code));
  w.str16(body.message);
  return w.take();
}

ErrorBody decode_error(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  ErrorBody body;
  uint16_t code = r.u16();
  if (code < 1 || code > 6) throw DecodeError("unknown error code " + std::to_string(code));
  body.code = static_cast<WireErrorCode>(code);
  body.message = r.str16();
  if (!r.done()) throw DecodeError("trailing bytes after Error body");
  return body;
}

std::string canonical_config_yaml(const std::map<std::string, std::string>& config) {
  auto quoted = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      switch (c) {
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    out += '"';
    return out;
  };
  std::string out;
  for (const auto& [key, value] : config) {
    out += quoted(key);
    out += ": ";
    out += quoted(value);
    out += '\n';
  }
  return out;
}

std::map<std::string, std::string> parse_config_yaml(const std::string& text) {
  std::map<std::string, std::string> out;
  if (text.empty()) return out;
  YAML::Node node;
  try {
    node = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw DecodeError(std::string("malformed config yaml: ") + e.what());
  }
  if (node.IsNull()) return out;
  if (!node.IsMap()) throw DecodeError("config yaml is not a map");
  for (const auto& kv : node) {
    if (!kv.second.IsScalar()) throw DecodeError("config values must be scalars");
    out[kv.first.as<std::string>()] = kv.second.Scalar();
  }
  return out;
}

}  // namespace oricf
