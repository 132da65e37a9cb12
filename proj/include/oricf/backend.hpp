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

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "oricf/catalog.hpp"
#include "oricf/errors.hpp"
#include "oricf/payload.hpp"

namespace oricf {

/// Latest values observed on auxiliary channels, keyed by channel name.
struct InferenceContext {
  std::map<std::string, Payload> latest;
};

/// One loaded model. Reference implementations are pure functions of
/// (inputs, ctx, config), so infer may be called from any thread.
class ModelInstance {
 public:
  virtual ~ModelInstance() = default;
  virtual Payload infer(const std::vector<Payload>& inputs,
                        const InferenceContext& ctx) const = 0;

  /// Context channels this instance reads, derived from its config.
  virtual std::vector<std::string> context_channels() const { return {}; }
};

struct ModelHandle {
  uint32_t id = 0;
  std::string model_id;
  std::string backend;
  std::shared_ptr<const ModelInstance> instance;

  Payload infer(const std::vector<Payload>& inputs, const InferenceContext& ctx) const;
};

/// Backend plugin contract: a descriptor plus a factory taking the node
/// config. The factory validates config values it knows about and throws
/// BackendError on bad ones; unrecognized keys are ignored so pipelines
/// survive backend swaps.
struct BackendPlugin {
  BackendDescriptor descriptor;
  std::function<std::shared_ptr<const ModelInstance>(const std::string& model_id,
                                                     const Config& config)>
      make;
};

class BackendRegistry {
 public:
  BackendRegistry() = default;

  void register_backend(BackendPlugin plugin);
  bool has_backend(const std::string& name) const;
  const BackendDescriptor* descriptor(const std::string& name) const;
  BackendCatalog catalog() const;

  /// Loads a model. Handles are unique per call; loading the same
  /// (model_id, backend, config) twice yields distinct handles with
  /// identical behavior.
  ModelHandle load_model(const std::string& model_id, const std::string& backend,
                         const Config& config) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, BackendPlugin> plugins_;
  mutable std::atomic<uint32_t> next_id_{1};
};

/// Process-wide registry preloaded with the reference backends:
/// stub-detector, template-llm, token-asr, identity, identity-detections.
BackendRegistry& builtin_registry();

/// Registers the reference backends into an arbitrary registry.
void register_builtin_backends(BackendRegistry& registry);

/// Deterministic stand-in detector: splits the image into block x block
/// tiles, computes the mean over all channels per tile, and emits one
/// "person" detection per tile whose mean strictly exceeds `threshold`.
DetectionSet stub_detector_infer(const Tensor& image, uint32_t threshold, uint32_t block);

}  // namespace oricf
