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

#include "oricf/adapters.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>

#include "oricf/net.hpp"
#include "oricf/payload_json.hpp"

namespace oricf {

void AdapterRegistry::register_adapter(AdapterPlugin plugin) {
  if (plugin.name.empty()) throw Error("adapter name must be nonempty");
  std::string name = plugin.name;
  if (!plugins_.emplace(name, std::move(plugin)).second) {
    throw Error("adapter '" + name + "' already registered");
  }
}

const AdapterPlugin* AdapterRegistry::find(const std::string& name) const {
  auto it = plugins_.find(name);
  return it == plugins_.end() ? nullptr : &it->second;
}

AdapterCatalog AdapterRegistry::catalog() const {
  AdapterCatalog cat;
  for (const auto& [name, plugin] : plugins_) cat.adapters.emplace(name, plugin.info);
  return cat;
}

std::unique_ptr<SourceAdapter> AdapterRegistry::make_source(const std::string& name,
                                                            const Config& params) const {
  const AdapterPlugin* plugin = find(name);
  if (!plugin) throw Error("unknown adapter '" + name + "'");
  if (!plugin->make_source) throw Error("adapter '" + name + "' cannot act as a source");
  return plugin->make_source(params);
}

std::unique_ptr<SinkAdapter> AdapterRegistry::make_sink(const std::string& name,
                                                        const Config& params) const {
  const AdapterPlugin* plugin = find(name);
  if (!plugin) throw Error("unknown adapter '" + name + "'");
  if (!plugin->make_sink) throw Error("adapter '" + name + "' cannot act as a sink");
  return plugin->make_sink(params);
}

namespace {

std::optional<uint64_t> param_uint(const Config& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  uint64_t value = 0;
  const std::string& raw = it->second;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc() || ptr != raw.data() + raw.size()) {
    throw Error("param '" + key + "' must be a nonnegative integer, got '" + raw + "'");
  }
  return value;
}

uint64_t param_uint_or(const Config& params, const std::string& key, uint64_t fallback) {
  auto v = param_uint(params, key);
  return v ? *v : fallback;
}

std::string param_required(const Config& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw Error("missing required param '" + key + "'");
  return it->second;
}

// Per-frame block positions from a JSON string like [[[0,0],[8,8]],[]].
std::vector<std::vector<std::pair<uint32_t, uint32_t>>> parse_blocks(const std::string& raw) {
  nlohmann::json parsed = nlohmann::json::parse(raw, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_array()) {
    throw Error("param 'blocks' must be a JSON array of frames");
  }
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> out;
  for (const auto& frame : parsed) {
    if (!frame.is_array()) throw Error("each 'blocks' frame must be an array of [x,y] pairs");
    std::vector<std::pair<uint32_t, uint32_t>> positions;
    for (const auto& pos : frame) {
      if (!pos.is_array() || pos.size() != 2 || !pos[0].is_number_unsigned() ||
          !pos[1].is_number_unsigned()) {
        throw Error("block position must be [x,y] with nonnegative integers");
      }
      positions.emplace_back(pos[0].get<uint32_t>(), pos[1].get<uint32_t>());
    }
    out.push_back(std::move(positions));
  }
  return out;
}

std::vector<int64_t> parse_int_list(const std::string& raw, const std::string& key) {
  nlohmann::json parsed = nlohmann::json::parse(raw, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_array()) {
    throw Error("param '" + key + "' must be a JSON integer array");
  }
  std::vector<int64_t> out;
  for (const auto& item : parsed) {
    if (!item.is_number_integer()) {
      throw Error("param '" + key + "' must be a JSON integer array");
    }
    out.push_back(item.get<int64_t>());
  }
  return out;
}

// Test-pattern camera: black frames with 8x8 blocks of 255 at the listed
// pixel positions, one entry of `blocks` per frame.
class SyntheticFramesSource final : public SourceAdapter {
 public:
  static constexpr uint32_t kBlockSize = 8;

  explicit SyntheticFramesSource(const Config& params) {
    width_ = static_cast<uint32_t>(param_uint_or(params, "width", 64));
    height_ = static_cast<uint32_t>(param_uint_or(params, "height", 64));
    channels_ = static_cast<uint32_t>(param_uint_or(params, "channels", 3));
    if (width_ == 0 || height_ == 0) throw Error("width/height must be positive");
    if (channels_ != 1 && channels_ != 3) throw Error("channels must be 1 or 3");
    blocks_ = parse_blocks(param_required(params, "blocks"));
    frames_ = param_uint_or(params, "frames", blocks_.size());
  }

  std::optional<Payload> next() override {
    if (index_ >= frames_ || stop_.load()) return std::nullopt;
    Tensor frame = Tensor::zeros(Dtype::U8, {height_, width_, channels_});
    if (index_ < blocks_.size()) {
      auto pix = frame.as_u8();
      for (const auto& [bx, by] : blocks_[index_]) {
        for (uint32_t dy = 0; dy < kBlockSize; ++dy) {
          uint32_t y = by + dy;
          if (y >= height_) break;
          for (uint32_t dx = 0; dx < kBlockSize; ++dx) {
            uint32_t x = bx + dx;
            if (x >= width_) break;
            size_t base = (static_cast<size_t>(y) * width_ + x) * channels_;
            for (uint32_t c = 0; c < channels_; ++c) pix[base + c] = 255;
          }
        }
      }
    }
    ++index_;
    return Payload{std::move(frame)};
  }

  void request_stop() override { stop_.store(true); }

 private:
  uint32_t width_ = 0;
  uint32_t height_ = 0;
  uint32_t channels_ = 3;
  uint64_t frames_ = 0;
  uint64_t index_ = 0;
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> blocks_;
  std::atomic<bool> stop_{false};
};

class FileSource final : public SourceAdapter {
 public:
  explicit FileSource(const Config& params) : path_(param_required(params, "path")) {
    stream_.open(path_);
    if (!stream_) throw Error("cannot open '" + path_ + "' for reading");
  }

  std::optional<Payload> next() override {
    std::string line;
    while (std::getline(stream_, line)) {
      ++line_no_;
      if (line.empty()) continue;
      try {
        return payload_from_json_line(line);
      } catch (const DecodeError& e) {
        throw Error(path_ + ":" + std::to_string(line_no_) + ": " + e.what());
      }
    }
    return std::nullopt;
  }

 private:
  std::string path_;
  std::ifstream stream_;
  uint64_t line_no_ = 0;
};

class FileSink final : public SinkAdapter {
 public:
  explicit FileSink(const Config& params) : path_(param_required(params, "path")) {
    stream_.open(path_, std::ios::trunc);
    if (!stream_) throw Error("cannot open '" + path_ + "' for writing");
  }

  void write(const Payload& payload) override {
    stream_ << payload_to_json_line(payload) << "\n";
    if (!stream_) throw Error("write to '" + path_ + "' failed");
  }

  void close() override { stream_.flush(); }

 private:
  std::string path_;
  std::ofstream stream_;
};

class StdinTextSource final : public SourceAdapter {
 public:
  std::optional<Payload> next() override {
    std::string line;
    if (!std::getline(std::cin, line)) return std::nullopt;
    return Payload{Text{std::move(line)}};
  }
};

class StdoutTextSink final : public SinkAdapter {
 public:
  void write(const Payload& payload) override {
    std::cout << std::get<Text>(payload).value << "\n";
    std::cout.flush();
  }
};

class TcpTextSource final : public SourceAdapter {
 public:
  explicit TcpTextSource(const Config& params)
      : socket_(Socket::connect(param_required(params, "host"),
                                static_cast<uint16_t>(param_uint_or(params, "port", 0)))) {}

  std::optional<Payload> next() override {
    auto line = socket_.read_line();
    if (!line) return std::nullopt;
    return Payload{Text{std::move(*line)}};
  }

  void request_stop() override { socket_.close(); }

 private:
  Socket socket_;
};

class TcpTextSink final : public SinkAdapter {
 public:
  explicit TcpTextSink(const Config& params)
      : socket_(Socket::connect(param_required(params, "host"),
                                static_cast<uint16_t>(param_uint_or(params, "port", 0)))) {}

  void write(const Payload& payload) override {
    socket_.write_all(std::get<Text>(payload).value + "\n");
  }

  void close() override { socket_.shutdown_write(); }

 private:
  Socket socket_;
};

// Scripted audio: one chunk per token id, the id stored in the first
// sample (the token-asr backend reads it back).
class AudioScriptSource final : public SourceAdapter {
 public:
  explicit AudioScriptSource(const Config& params) {
    tokens_ = parse_int_list(param_required(params, "tokens"), "tokens");
    for (int64_t t : tokens_) {
      if (t < INT16_MIN || t > INT16_MAX) throw Error("token id out of i16 range");
    }
    sample_rate_ = static_cast<uint32_t>(param_uint_or(params, "sample_rate", 16000));
    samples_per_chunk_ = param_uint_or(params, "samples_per_chunk", 160);
    if (sample_rate_ == 0) throw Error("sample_rate must be positive");
    if (samples_per_chunk_ == 0) throw Error("samples_per_chunk must be positive");
  }

  std::optional<Payload> next() override {
    if (index_ >= tokens_.size()) return std::nullopt;
    AudioChunk chunk;
    chunk.sample_rate_hz = sample_rate_;
    chunk.samples.assign(samples_per_chunk_, 0);
    chunk.samples[0] = static_cast<int16_t>(tokens_[index_]);
    ++index_;
    return Payload{std::move(chunk)};
  }

 private:
  std::vector<int64_t> tokens_;
  uint32_t sample_rate_ = 16000;
  uint64_t samples_per_chunk_ = 160;
  size_t index_ = 0;
};

std::vector<std::string> no_params(const Config&) { return {}; }

std::vector<std::string> validate_with(
    const std::function<void(const Config&)>& probe, const Config& params) {
  try {
    probe(params);
  } catch (const Error& e) {
    return {e.what()};
  }
  return {};
}

}  // namespace

void register_builtin_adapters(AdapterRegistry& registry) {
  registry.register_adapter(AdapterPlugin{
      "synthetic-frames",
      {true, false, PayloadKind::Image,
       [](const Config& params) {
         return validate_with(
             [](const Config& p) {
               uint32_t w = static_cast<uint32_t>(param_uint_or(p, "width", 64));
               uint32_t h = static_cast<uint32_t>(param_uint_or(p, "height", 64));
               uint32_t c = static_cast<uint32_t>(param_uint_or(p, "channels", 3));
               if (w == 0 || h == 0) throw Error("width/height must be positive");
               if (c != 1 && c != 3) throw Error("channels must be 1 or 3");
               parse_blocks(param_required(p, "blocks"));
               param_uint(p, "frames");
               param_uint(p, "interval_ms");
             },
             params);
       }},
      [](const Config& params) { return std::make_unique<SyntheticFramesSource>(params); },
      nullptr});
  registry.register_adapter(AdapterPlugin{
      "file",
      {true, true, std::nullopt,
       [](const Config& params) {
         return validate_with([](const Config& p) { param_required(p, "path"); }, params);
       }},
      [](const Config& params) { return std::make_unique<FileSource>(params); },
      [](const Config& params) { return std::make_unique<FileSink>(params); }});
  registry.register_adapter(AdapterPlugin{
      "stdin-text",
      {true, false, PayloadKind::Text, no_params},
      [](const Config&) { return std::make_unique<StdinTextSource>(); },
      nullptr});
  registry.register_adapter(AdapterPlugin{
      "stdout-text",
      {false, true, PayloadKind::Text, no_params},
      nullptr,
      [](const Config&) { return std::make_unique<StdoutTextSink>(); }});
  registry.register_adapter(AdapterPlugin{
      "tcp-text",
      {true, true, PayloadKind::Text,
       [](const Config& params) {
         return validate_with(
             [](const Config& p) {
               param_required(p, "host");
               auto port = param_uint(p, "port");
               if (!port || *port == 0 || *port > 65535) {
                 throw Error("param 'port' must be in [1,65535]");
               }
             },
             params);
       }},
      [](const Config& params) { return std::make_unique<TcpTextSource>(params); },
      [](const Config& params) { return std::make_unique<TcpTextSink>(params); }});
  registry.register_adapter(AdapterPlugin{
      "audio-script",
      {true, false, PayloadKind::Audio,
       [](const Config& params) {
         return validate_with(
             [](const Config& p) {
               for (int64_t t : parse_int_list(param_required(p, "tokens"), "tokens")) {
                 if (t < INT16_MIN || t > INT16_MAX) throw Error("token id out of i16 range");
               }
               if (param_uint_or(p, "sample_rate", 16000) == 0) {
                 throw Error("sample_rate must be positive");
               }
               if (param_uint_or(p, "samples_per_chunk", 160) == 0) {
                 throw Error("samples_per_chunk must be positive");
               }
             },
             params);
       }},
      [](const Config& params) { return std::make_unique<AudioScriptSource>(params); },
      nullptr});
}

AdapterRegistry& builtin_adapters() {
  static AdapterRegistry* registry = [] {
    auto* r = new AdapterRegistry();
    register_builtin_adapters(*r);
    return r;
  }();
  return *registry;
}

const AdapterCatalog& builtin_adapter_catalog() {
  static const AdapterCatalog* catalog = new AdapterCatalog(builtin_adapters().catalog());
  return *catalog;
}

}  // namespace oricf
