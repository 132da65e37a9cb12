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

#include "oricf/postproc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace oricf {

DetectionSet label_map(const DetectionSet& detections,
                       const std::map<std::string, std::string>& mapping) {
  DetectionSet out = detections;
  for (Detection& det : out.items) {
    auto it = mapping.find(det.label);
    if (it != mapping.end()) det.label = it->second;
  }
  return out;
}

Scalar count_detections(const DetectionSet& detections, const std::string& label,
                        double min_score) {
  if (!(min_score >= 0.0 && min_score <= 1.0)) {
    throw Error("count: min_score out of [0,1]");
  }
  uint64_t n = 0;
  for (const Detection& det : detections.items) {
    if (det.label == label && det.score >= min_score) ++n;
  }
  return Scalar{static_cast<double>(n)};
}

namespace {

// Half-up rounding then clamp to [0, limit-1]; `limit` is W or H.
uint32_t denorm(float coord, uint32_t limit) {
  double scaled = std::floor(static_cast<double>(coord) * limit + 0.5);
  if (scaled < 0) return 0;
  if (scaled > limit - 1) return limit - 1;
  return static_cast<uint32_t>(scaled);
}

}  // namespace

Tensor annotate(const Tensor& image, const DetectionSet& detections, uint8_t value) {
  if (image.dtype != Dtype::U8 || image.shape.size() != 3) {
    throw Error("annotate expects a u8 [H,W,C] tensor");
  }
  Tensor out = image;
  const uint32_t height = out.shape[0];
  const uint32_t width = out.shape[1];
  const uint32_t chans = out.shape[2];
  if (height == 0 || width == 0 || chans == 0) return out;
  auto pix = out.as_u8();
  auto paint = [&](uint32_t x, uint32_t y) {
    size_t base = (static_cast<size_t>(y) * width + x) * chans;
    for (uint32_t c = 0; c < chans; ++c) pix[base + c] = value;
  };
  for (const Detection& det : detections.items) {
    uint32_t x0 = denorm(det.bbox[0], width);
    uint32_t y0 = denorm(det.bbox[1], height);
    uint32_t x1 = denorm(det.bbox[2], width);
    uint32_t y1 = denorm(det.bbox[3], height);
    for (uint32_t x = x0; x <= x1; ++x) {
      paint(x, y0);
      paint(x, y1);
    }
    for (uint32_t y = y0; y <= y1; ++y) {
      paint(x0, y);
      paint(x1, y);
    }
  }
  return out;
}

Text to_text(const Payload& payload) {
  PayloadKind kind = kind_of(payload);
  if (kind != PayloadKind::Detections && kind != PayloadKind::Scalar) {
    throw Error("to_text accepts detections or scalar, got " +
                std::string(to_string(kind)));
  }
  return Text{render_payload_text(payload)};
}

PostChain PostChain::compile(const std::vector<PostStepSpec>& steps) {
  PostChain chain;
  for (const PostStepSpec& spec : steps) {
    Step step;
    step.op = spec.op;
    step.publish = spec.publish;
    auto scalar_param = [&](const char* key) -> const std::string* {
      auto it = spec.params.find(key);
      if (it == spec.params.end()) return nullptr;
      return std::get_if<std::string>(&it->second);
    };
    switch (spec.op) {
      case PostOp::LabelMap: {
        auto it = spec.params.find("map");
        if (it == spec.params.end() ||
            !std::holds_alternative<std::map<std::string, std::string>>(it->second)) {
          throw Error("label_map requires a 'map' parameter");
        }
        step.mapping = std::get<std::map<std::string, std::string>>(it->second);
        break;
      }
      case PostOp::Count: {
        const std::string* label = scalar_param("label");
        if (!label) throw Error("count requires a 'label' parameter");
        step.label = *label;
        if (const std::string* raw = scalar_param("min_score")) {
          double v = 0;
          auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), v);
          if (ec != std::errc() || ptr != raw->data() + raw->size() || v < 0.0 || v > 1.0) {
            throw Error("count: min_score must be in [0,1]");
          }
          step.min_score = v;
        }
        break;
      }
      case PostOp::Annotate: {
        if (const std::string* raw = scalar_param("value")) {
          int64_t v = 0;
          auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), v);
          if (ec != std::errc() || ptr != raw->data() + raw->size() || v < 0 || v > 255) {
            throw Error("annotate: value must be in [0,255]");
          }
          step.value = static_cast<uint8_t>(v);
        }
        break;
      }
      case PostOp::ToText:
        break;
      case PostOp::Format: {
        const std::string* raw = scalar_param("template");
        if (!raw) throw Error("format requires a 'template' parameter");
        step.tpl = TextTemplate::parse(*raw);
        break;
      }
    }
    chain.steps_.push_back(std::move(step));
  }
  return chain;
}

Payload PostChain::run(Payload input, const Payload* trigger, const InferenceContext& ctx,
                       const PublishFn& publish) const {
  Payload current = std::move(input);
  for (const Step& step : steps_) {
    switch (step.op) {
      case PostOp::LabelMap: {
        const auto* d = std::get_if<DetectionSet>(&current);
        if (!d) throw Error("label_map expects detections");
        current = label_map(*d, step.mapping);
        break;
      }
      case PostOp::Count: {
        const auto* d = std::get_if<DetectionSet>(&current);
        if (!d) throw Error("count expects detections");
        current = count_detections(*d, step.label, step.min_score);
        break;
      }
      case PostOp::Annotate: {
        const auto* d = std::get_if<DetectionSet>(&current);
        if (!d) throw Error("annotate expects detections");
        if (!trigger) throw Error("annotate requires the node's trigger image");
        const auto* img = std::get_if<Tensor>(trigger);
        if (!img) throw Error("annotate trigger is not an image tensor");
        current = annotate(*img, *d, step.value);
        break;
      }
      case PostOp::ToText:
        current = to_text(current);
        break;
      case PostOp::Format: {
        current = Text{step.tpl->render(render_payload_text(current), ctx.latest)};
        break;
      }
    }
    if (step.publish && publish) {
      publish(*step.publish, current);
    }
  }
  return current;
}

std::vector<std::string> PostChain::publish_channels() const {
  std::vector<std::string> out;
  for (const Step& step : steps_) {
    if (step.publish) out.push_back(*step.publish);
  }
  return out;
}

}  // namespace oricf
