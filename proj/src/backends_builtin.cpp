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

#include <json.hpp>

#include <charconv>
#include <utility>

#include "oricf/backend.hpp"
#include "oricf/text_template.hpp"

namespace oricf {

namespace {

uint64_t config_uint(const Config& config, const std::string& key, uint64_t fallback,
                     uint64_t min, uint64_t max) {
  auto it = config.find(key);
  if (it == config.end()) return fallback;
  const std::string& raw = it->second;
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc() || ptr != raw.data() + raw.size() || value < min || value > max) {
    throw BackendError("invalid config value for '" + key + "': '" + raw + "'");
  }
  return value;
}

std::vector<std::string> config_string_list(const Config& config, const std::string& key) {
  auto it = config.find(key);
  if (it == config.end()) return {};
  nlohmann::json parsed = nlohmann::json::parse(it->second, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_array()) {
    throw BackendError("config '" + key + "' must be a JSON string array");
  }
  std::vector<std::string> out;
  for (const auto& item : parsed) {
    if (!item.is_string()) {
      throw BackendError("config '" + key + "' must be a JSON string array");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

const Tensor& expect_one_input(const std::vector<Payload>& inputs, PayloadKind kind) {
  if (inputs.size() != 1) {
    throw BackendError("expected exactly one input, got " + std::to_string(inputs.size()));
  }
  if (!kind_accepts(kind, inputs[0])) {
    throw BackendError("input kind mismatch: expected " + std::string(to_string(kind)) +
                       ", got " + std::string(to_string(kind_of(inputs[0]))));
  }
  return std::get<Tensor>(inputs[0]);
}

class StubDetector final : public ModelInstance {
 public:
  StubDetector(uint32_t threshold, uint32_t block) : threshold_(threshold), block_(block) {}

  Payload infer(const std::vector<Payload>& inputs, const InferenceContext&) const override {
    const Tensor& image = expect_one_input(inputs, PayloadKind::Image);
    return stub_detector_infer(image, threshold_, block_);
  }

 private:
  uint32_t threshold_;
  uint32_t block_;
};

class IdentityDetections final : public ModelInstance {
 public:
  Payload infer(const std::vector<Payload>& inputs, const InferenceContext&) const override {
    expect_one_input(inputs, PayloadKind::Image);
    return DetectionSet{};
  }
};

class IdentityText final : public ModelInstance {
 public:
  Payload infer(const std::vector<Payload>& inputs, const InferenceContext&) const override {
    if (inputs.size() != 1 || kind_of(inputs[0]) != PayloadKind::Text) {
      throw BackendError("identity expects one text input");
    }
    return inputs[0];
  }
};

class TemplateLlm final : public ModelInstance {
 public:
  explicit TemplateLlm(TextTemplate tpl) : template_(std::move(tpl)) {}

  Payload infer(const std::vector<Payload>& inputs, const InferenceContext& ctx) const override {
    if (inputs.size() != 1 || kind_of(inputs[0]) != PayloadKind::Text) {
      throw BackendError("template-llm expects one text input");
    }
    const std::string& query = std::get<Text>(inputs[0]).value;
    return Text{template_.render(query, ctx.latest)};
  }

  std::vector<std::string> context_channels() const override { return template_.channels(); }

 private:
  TextTemplate template_;
};

class TokenAsr final : public ModelInstance {
 public:
  explicit TokenAsr(std::vector<std::string> vocab) : vocab_(std::move(vocab)) {}

  Payload infer(const std::vector<Payload>& inputs, const InferenceContext&) const override {
    if (inputs.size() != 1 || kind_of(inputs[0]) != PayloadKind::Audio) {
      throw BackendError("token-asr expects one audio input");
    }
    const AudioChunk& chunk = std::get<AudioChunk>(inputs[0]);
    if (chunk.samples.empty()) {
      throw BackendError("token-asr requires at least one sample");
    }
    int16_t token = chunk.samples[0];
    if (token < 0) {
      throw BackendError("negative token id " + std::to_string(token));
    }
    if (static_cast<size_t>(token) < vocab_.size()) {
      return Text{vocab_[static_cast<size_t>(token)]};
    }
    return Text{};
  }

 private:
  std::vector<std::string> vocab_;
};

}  // namespace

DetectionSet stub_detector_infer(const Tensor& image, uint32_t threshold, uint32_t block) {
  if (image.dtype != Dtype::U8 || image.shape.size() != 3) {
    throw BackendError("stub-detector expects a u8 [H,W,C] tensor");
  }
  const uint32_t height = image.shape[0];
  const uint32_t width = image.shape[1];
  const uint32_t chans = image.shape[2];
  DetectionSet out;
  if (block == 0 || chans == 0) return out;
  const uint32_t tiles_y = height / block;
  const uint32_t tiles_x = width / block;
  const uint64_t tile_count = static_cast<uint64_t>(block) * block * chans;
  std::span<const uint8_t> pix = image.as_u8();
  for (uint32_t ty = 0; ty < tiles_y; ++ty) {
    for (uint32_t tx = 0; tx < tiles_x; ++tx) {
      uint64_t sum = 0;
      const uint64_t tile_row_elems = static_cast<uint64_t>(block) * chans;
      for (uint32_t dy = 0; dy < block; ++dy) {
        const uint64_t row = static_cast<uint64_t>(ty) * block + dy;
        const uint64_t base = (row * width + static_cast<uint64_t>(tx) * block) * chans;
        for (uint64_t i = 0; i < tile_row_elems; ++i) sum += pix[base + i];
      }
      // Strict inequality; a tile mean exactly at threshold is no detection.
      if (sum > static_cast<uint64_t>(threshold) * tile_count) {
        Detection det;
        det.label = "person";
        det.score = static_cast<float>(static_cast<double>(sum) /
                                       (static_cast<double>(tile_count) * 255.0));
        det.bbox = {
            static_cast<float>(static_cast<double>(tx * block) / width),
            static_cast<float>(static_cast<double>(ty * block) / height),
            static_cast<float>(static_cast<double>((tx + 1) * block) / width),
            static_cast<float>(static_cast<double>((ty + 1) * block) / height),
        };
        out.items.push_back(std::move(det));
      }
    }
  }
  return out;
}

void register_builtin_backends(BackendRegistry& registry) {
  registry.register_backend(BackendPlugin{
      BackendDescriptor{"stub-detector", {PayloadKind::Image}, PayloadKind::Detections, false},
      [](const std::string&, const Config& config) -> std::shared_ptr<const ModelInstance> {
        uint32_t threshold =
            static_cast<uint32_t>(config_uint(config, "threshold", 200, 0, 255));
        uint32_t block = static_cast<uint32_t>(config_uint(config, "block", 8, 1, 4096));
        return std::make_shared<StubDetector>(threshold, block);
      }});
  registry.register_backend(BackendPlugin{
      BackendDescriptor{"identity-detections", {PayloadKind::Image}, PayloadKind::Detections,
                        false},
      [](const std::string&, const Config&) -> std::shared_ptr<const ModelInstance> {
        return std::make_shared<IdentityDetections>();
      }});
  registry.register_backend(BackendPlugin{
      BackendDescriptor{"identity", {PayloadKind::Text}, PayloadKind::Text, false},
      [](const std::string&, const Config&) -> std::shared_ptr<const ModelInstance> {
        return std::make_shared<IdentityText>();
      }});
  registry.register_backend(BackendPlugin{
      BackendDescriptor{"template-llm", {PayloadKind::Text}, PayloadKind::Text, true},
      [](const std::string&, const Config& config) -> std::shared_ptr<const ModelInstance> {
        auto it = config.find("template");
        if (it == config.end()) {
          throw BackendError("template-llm requires config key 'template'");
        }
        return std::make_shared<TemplateLlm>(TextTemplate::parse(it->second));
      }});
  registry.register_backend(BackendPlugin{
      BackendDescriptor{"token-asr", {PayloadKind::Audio}, PayloadKind::Text, false},
      [](const std::string&, const Config& config) -> std::shared_ptr<const ModelInstance> {
        return std::make_shared<TokenAsr>(config_string_list(config, "vocab"));
      }});
}

}  // namespace oricf
