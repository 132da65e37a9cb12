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

#include "oricf/payload.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace oricf {

std::string_view to_string(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::Tensor: return "tensor";
    case PayloadKind::Image: return "image";
    case PayloadKind::Text: return "text";
    case PayloadKind::Audio: return "audio";
    case PayloadKind::Detections: return "detections";
    case PayloadKind::Scalar: return "scalar";
  }
  return "?";
}

std::optional<PayloadKind> parse_payload_kind(std::string_view name) {
  if (name == "tensor") return PayloadKind::Tensor;
  if (name == "image") return PayloadKind::Image;
  if (name == "text") return PayloadKind::Text;
  if (name == "audio") return PayloadKind::Audio;
  if (name == "detections") return PayloadKind::Detections;
  if (name == "scalar") return PayloadKind::Scalar;
  return std::nullopt;
}

std::string_view to_string(Dtype dtype) {
  switch (dtype) {
    case Dtype::U8: return "u8";
    case Dtype::F32: return "f32";
    case Dtype::I64: return "i64";
  }
  return "?";
}

std::optional<Dtype> parse_dtype(std::string_view name) {
  if (name == "u8") return Dtype::U8;
  if (name == "f32") return Dtype::F32;
  if (name == "i64") return Dtype::I64;
  return std::nullopt;
}

size_t dtype_size(Dtype dtype) {
  switch (dtype) {
    case Dtype::U8: return 1;
    case Dtype::F32: return 4;
    case Dtype::I64: return 8;
  }
  return 0;
}

uint64_t Tensor::numel() const {
  uint64_t n = 1;
  for (uint32_t d : shape) n *= d;
  return n;
}

Tensor Tensor::zeros(Dtype dtype, std::vector<uint32_t> shape) {
  Tensor t;
  t.dtype = dtype;
  t.shape = std::move(shape);
  t.data.assign(t.numel() * dtype_size(dtype), 0);
  return t;
}

Tensor Tensor::from_u8(std::vector<uint32_t> shape, std::vector<uint8_t> values) {
  Tensor t;
  t.dtype = Dtype::U8;
  t.shape = std::move(shape);
  t.data = std::move(values);
  if (t.data.size() != t.numel()) {
    throw std::invalid_argument("tensor data length does not match shape");
  }
  return t;
}

namespace {

template <typename T>
std::vector<uint8_t> to_le_bytes(std::span<const T> values) {
  std::vector<uint8_t> out(values.size() * sizeof(T));
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out.data(), values.data(), out.size());
  } else {
    for (size_t i = 0; i < values.size(); ++i) {
      T v = values[i];
      auto raw = std::bit_cast<std::array<uint8_t, sizeof(T)>>(v);
      for (size_t b = 0; b < sizeof(T); ++b) out[i * sizeof(T) + b] = raw[sizeof(T) - 1 - b];
    }
  }
  return out;
}

template <typename T>
std::vector<T> from_le_bytes(std::span<const uint8_t> bytes) {
  std::vector<T> out(bytes.size() / sizeof(T));
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out.data(), bytes.data(), out.size() * sizeof(T));
  } else {
    for (size_t i = 0; i < out.size(); ++i) {
      std::array<uint8_t, sizeof(T)> raw;
      for (size_t b = 0; b < sizeof(T); ++b) raw[sizeof(T) - 1 - b] = bytes[i * sizeof(T) + b];
      out[i] = std::bit_cast<T>(raw);
    }
  }
  return out;
}

}  // namespace

Tensor Tensor::from_f32(std::vector<uint32_t> shape, std::span<const float> values) {
  Tensor t;
  t.dtype = Dtype::F32;
  t.shape = std::move(shape);
  t.data = to_le_bytes(values);
  if (t.data.size() != t.numel() * 4) {
    throw std::invalid_argument("tensor data length does not match shape");
  }
  return t;
}

Tensor Tensor::from_i64(std::vector<uint32_t> shape, std::span<const int64_t> values) {
  Tensor t;
  t.dtype = Dtype::I64;
  t.shape = std::move(shape);
  t.data = to_le_bytes(values);
  if (t.data.size() != t.numel() * 8) {
    throw std::invalid_argument("tensor data length does not match shape");
  }
  return t;
}

std::vector<float> Tensor::to_f32() const {
  if (dtype != Dtype::F32) throw std::invalid_argument("tensor is not f32");
  return from_le_bytes<float>(data);
}

std::vector<int64_t> Tensor::to_i64() const {
  if (dtype != Dtype::I64) throw std::invalid_argument("tensor is not i64");
  return from_le_bytes<int64_t>(data);
}

PayloadKind kind_of(const Payload& payload) {
  switch (payload.index()) {
    case 0: return PayloadKind::Tensor;
    case 1: return PayloadKind::Text;
    case 2: return PayloadKind::Audio;
    case 3: return PayloadKind::Detections;
    default: return PayloadKind::Scalar;
  }
}

bool is_image(const Tensor& tensor) {
  if (tensor.dtype != Dtype::U8 || tensor.shape.size() != 3) return false;
  uint32_t c = tensor.shape[2];
  return c == 1 || c == 3;
}

bool kind_accepts(PayloadKind declared, const Payload& payload) {
  PayloadKind actual = kind_of(payload);
  if (declared == PayloadKind::Image) {
    return actual == PayloadKind::Tensor && is_image(std::get<Tensor>(payload));
  }
  return declared == actual;
}

std::optional<std::string> validate_payload(const Payload& payload) {
  if (const auto* t = std::get_if<Tensor>(&payload)) {
    if (t->data.size() != t->numel() * t->element_size()) {
      return "tensor data length does not match shape";
    }
    return std::nullopt;
  }
  if (const auto* a = std::get_if<AudioChunk>(&payload)) {
    if (a->sample_rate_hz == 0) return "audio sample_rate_hz must be > 0";
    return std::nullopt;
  }
  if (const auto* d = std::get_if<DetectionSet>(&payload)) {
    for (size_t i = 0; i < d->items.size(); ++i) {
      const Detection& det = d->items[i];
      if (det.label.empty()) return "detection label empty at index " + std::to_string(i);
      if (!(det.score >= 0.0f && det.score <= 1.0f)) {
        return "detection score out of [0,1] at index " + std::to_string(i);
      }
      for (float v : det.bbox) {
        if (!(v >= 0.0f && v <= 1.0f)) {
          return "detection bbox out of [0,1] at index " + std::to_string(i);
        }
      }
      if (det.bbox[0] > det.bbox[2] || det.bbox[1] > det.bbox[3]) {
        return "detection bbox inverted at index " + std::to_string(i);
      }
    }
    return std::nullopt;
  }
  return std::nullopt;
}

std::string render_scalar(double value) {
  if (std::isfinite(value) && value == std::floor(value) &&
      std::abs(value) < 9.007199254740992e15) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), static_cast<int64_t>(value));
    return std::string(buf, ptr);
  }
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::string render_payload_text(const Payload& payload) {
  if (const auto* s = std::get_if<Scalar>(&payload)) return render_scalar(s->value);
  if (const auto* t = std::get_if<Text>(&payload)) return t->value;
  if (const auto* d = std::get_if<DetectionSet>(&payload)) {
    std::string out;
    for (size_t i = 0; i < d->items.size(); ++i) {
      const Detection& det = d->items[i];
      if (i) out += '\n';
      out += det.label;
      out += ' ';
      out += fixed4(det.score);
      for (float v : det.bbox) {
        out += ' ';
        out += fixed4(v);
      }
    }
    return out;
  }
  if (const auto* t = std::get_if<Tensor>(&payload)) {
    std::ostringstream os;
    os << "tensor<" << to_string(t->dtype) << ">[";
    for (size_t i = 0; i < t->shape.size(); ++i) {
      if (i) os << 'x';
      os << t->shape[i];
    }
    os << ']';
    return os.str();
  }
  const auto& a = std::get<AudioChunk>(payload);
  std::ostringstream os;
  os << "audio<" << a.sample_rate_hz << "Hz," << a.samples.size() << " samples>";
  return os.str();
}

}  // namespace oricf
