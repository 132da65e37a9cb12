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

#include "oricf/payload_json.hpp"

#include <json.hpp>

#include "oricf/errors.hpp"

namespace oricf {

namespace {

constexpr char kBase64Chars[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int base64_index(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

}  // namespace

std::string base64_encode(std::span<const uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kBase64Chars[(v >> 18) & 0x3F];
    out += kBase64Chars[(v >> 12) & 0x3F];
    out += kBase64Chars[(v >> 6) & 0x3F];
    out += kBase64Chars[v & 0x3F];
  }
  size_t rest = bytes.size() - i;
  if (rest == 1) {
    uint32_t v = bytes[i] << 16;
    out += kBase64Chars[(v >> 18) & 0x3F];
    out += kBase64Chars[(v >> 12) & 0x3F];
    out += "==";
  } else if (rest == 2) {
    uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += kBase64Chars[(v >> 18) & 0x3F];
    out += kBase64Chars[(v >> 12) & 0x3F];
    out += kBase64Chars[(v >> 6) & 0x3F];
    out += '=';
  }
  return out;
}

std::vector<uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw DecodeError("base64 length not a multiple of 4");
  std::vector<uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int padding = 0;
    for (int j = 0; j < 4; ++j) {
      char c = text[i + j];
      if (c == '=') {
        if (i + 4 != text.size() || j < 2) throw DecodeError("unexpected base64 padding");
        vals[j] = 0;
        ++padding;
      } else {
        if (padding > 0) throw DecodeError("base64 data after padding");
        vals[j] = base64_index(c);
        if (vals[j] < 0) throw DecodeError("invalid base64 character");
      }
    }
    uint32_t v = (vals[0] << 18) | (vals[1] << 12) | (vals[2] << 6) | vals[3];
    out.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
    if (padding < 2) out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
    if (padding < 1) out.push_back(static_cast<uint8_t>(v & 0xFF));
  }
  return out;
}

std::string payload_to_json_line(const Payload& payload) {
  nlohmann::ordered_json j;
  if (const auto* t = std::get_if<Tensor>(&payload)) {
    j["kind"] = "tensor";
    j["dtype"] = std::string(to_string(t->dtype));
    j["shape"] = t->shape;
    j["data"] = base64_encode(t->data);
  } else if (const auto* s = std::get_if<Text>(&payload)) {
    j["kind"] = "text";
    j["text"] = s->value;
  } else if (const auto* a = std::get_if<AudioChunk>(&payload)) {
    j["kind"] = "audio";
    j["sample_rate_hz"] = a->sample_rate_hz;
    j["samples"] = a->samples;
  } else if (const auto* d = std::get_if<DetectionSet>(&payload)) {
    j["kind"] = "detections";
    auto items = nlohmann::ordered_json::array();
    for (const Detection& det : d->items) {
      nlohmann::ordered_json item;
      item["label"] = det.label;
      item["score"] = det.score;
      item["bbox"] = det.bbox;
      items.push_back(std::move(item));
    }
    j["items"] = std::move(items);
  } else {
    j["kind"] = "scalar";
    j["value"] = std::get<Scalar>(payload).value;
  }
  return j.dump();
}

Payload payload_from_json_line(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DecodeError("malformed payload JSON");
  try {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "tensor") {
      Tensor t;
      auto dtype = parse_dtype(j.at("dtype").get<std::string>());
      if (!dtype) throw DecodeError("unknown tensor dtype");
      t.dtype = *dtype;
      t.shape = j.at("shape").get<std::vector<uint32_t>>();
      t.data = base64_decode(j.at("data").get<std::string>());
      if (t.data.size() != t.numel() * t.element_size()) {
        throw DecodeError("tensor data length does not match shape");
      }
      return t;
    }
    if (kind == "text") return Text{j.at("text").get<std::string>()};
    if (kind == "audio") {
      AudioChunk a;
      a.sample_rate_hz = j.at("sample_rate_hz").get<uint32_t>();
      a.samples = j.at("samples").get<std::vector<int16_t>>();
      return a;
    }
    if (kind == "detections") {
      DetectionSet d;
      for (const auto& item : j.at("items")) {
        Detection det;
        det.label = item.at("label").get<std::string>();
        det.score = item.at("score").get<float>();
        auto bbox = item.at("bbox").get<std::vector<float>>();
        if (bbox.size() != 4) throw DecodeError("bbox must have 4 values");
        std::copy(bbox.begin(), bbox.end(), det.bbox.begin());
        d.items.push_back(std::move(det));
      }
      return d;
    }
    if (kind == "scalar") return Scalar{j.at("value").get<double>()};
    throw DecodeError("unknown payload kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("malformed payload JSON: ") + e.what());
  }
}

}  // namespace oricf
