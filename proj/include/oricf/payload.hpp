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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace oricf {

/// Kind of data a channel carries. `Image` is a constrained tensor
/// (u8, [H,W,C], C in {1,3}); all other kinds map 1:1 to payload types.
enum class PayloadKind : uint8_t {
  Tensor,
  Image,
  Text,
  Audio,
  Detections,
  Scalar,
};

std::string_view to_string(PayloadKind kind);
std::optional<PayloadKind> parse_payload_kind(std::string_view name);

enum class Dtype : uint8_t {
  U8 = 1,
  F32 = 2,
  I64 = 3,
};

std::string_view to_string(Dtype dtype);
std::optional<Dtype> parse_dtype(std::string_view name);
size_t dtype_size(Dtype dtype);

/// Dense row-major tensor. `data` holds raw little-endian element bytes;
/// its length must be numel() * dtype_size(dtype).
struct Tensor {
  Dtype dtype = Dtype::U8;
  std::vector<uint32_t> shape;
  std::vector<uint8_t> data;

  uint64_t numel() const;
  size_t element_size() const { return dtype_size(dtype); }

  static Tensor zeros(Dtype dtype, std::vector<uint32_t> shape);
  static Tensor from_u8(std::vector<uint32_t> shape, std::vector<uint8_t> values);
  static Tensor from_f32(std::vector<uint32_t> shape, std::span<const float> values);
  static Tensor from_i64(std::vector<uint32_t> shape, std::span<const int64_t> values);

  std::span<const uint8_t> as_u8() const { return data; }
  std::span<uint8_t> as_u8() { return data; }
  std::vector<float> to_f32() const;
  std::vector<int64_t> to_i64() const;

  bool operator==(const Tensor&) const = default;
};

struct Text {
  std::string value;
  bool operator==(const Text&) const = default;
};

struct AudioChunk {
  uint32_t sample_rate_hz = 0;
  std::vector<int16_t> samples;
  bool operator==(const AudioChunk&) const = default;
};

struct Detection {
  std::string label;
  float score = 0.0f;
  // Normalized (x0, y0, x1, y1), each in [0,1], x0 <= x1, y0 <= y1.
  std::array<float, 4> bbox{};
  bool operator==(const Detection&) const = default;
};

struct DetectionSet {
  std::vector<Detection> items;
  bool operator==(const DetectionSet&) const = default;
};

struct Scalar {
  double value = 0.0;
  bool operator==(const Scalar&) const = default;
};

using Payload = std::variant<Tensor, Text, AudioChunk, DetectionSet, Scalar>;

/// Kind of the payload as stored (never PayloadKind::Image; images are
/// tensors that additionally satisfy is_image()).
PayloadKind kind_of(const Payload& payload);

/// True if the tensor is u8 [H,W,C] with C in {1,3}.
bool is_image(const Tensor& tensor);

/// True if `payload` may travel on a channel declared with `declared` kind.
/// A tensor channel accepts any tensor; an image channel only image tensors.
bool kind_accepts(PayloadKind declared, const Payload& payload);

/// Structural validity check (tensor data length, detection ranges,
/// audio sample rate). Returns an error description or nullopt when valid.
std::optional<std::string> validate_payload(const Payload& payload);

/// Shortest round-trip decimal; integral values print without a fraction
/// ("2", not "2.0").
std::string render_scalar(double value);

/// Text rendering used by templates and the to_text operator:
/// Text verbatim; Scalar via render_scalar; DetectionSet as lines
/// "label score x0 y0 x1 y1" (score/coords at 4 decimals); Tensor and
/// AudioChunk as a short structural summary.
std::string render_payload_text(const Payload& payload);

}  // namespace oricf
