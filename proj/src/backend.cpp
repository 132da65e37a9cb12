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

#include "oricf/backend.hpp"

namespace oricf {

Payload ModelHandle::infer(const std::vector<Payload>& inputs,
                           const InferenceContext& ctx) const {
  if (!instance) throw BackendError("infer on empty model handle");
  return instance->infer(inputs, ctx);
}

void BackendRegistry::register_backend(BackendPlugin plugin) {
  std::lock_guard lock(mu_);
  std::string name = plugin.descriptor.name;
  if (name.empty()) throw Error("backend name must be nonempty");
  if (plugin.descriptor.input_kinds.empty()) {
    throw Error("backend '" + name + "' declares no input kinds");
  }
  if (!plugins_.emplace(name, std::move(plugin)).second) {
    throw Error("backend '" + name + "' already registered");
  }
}

bool BackendRegistry::has_backend(const std::string& name) const {
  std::lock_guard lock(mu_);
  return plugins_.count(name) > 0;
}

const BackendDescriptor* BackendRegistry::descriptor(const std::string& name) const {
  std::lock_guard lock(mu_);
  auto it = plugins_.find(name);
  return it == plugins_.end() ? nullptr : &it->second.descriptor;
}

BackendCatalog BackendRegistry::catalog() const {
  std::lock_guard lock(mu_);
  BackendCatalog cat;
  for (const auto& [name, plugin] : plugins_) {
    cat.backends.emplace(name, plugin.descriptor);
  }
  return cat;
}

ModelHandle BackendRegistry::load_model(const std::string& model_id,
                                        const std::string& backend,
                                        const Config& config) const {
  BackendPlugin plugin;
  {
    std::lock_guard lock(mu_);
    auto it = plugins_.find(backend);
    if (it == plugins_.end()) {
      throw BackendError("unknown backend '" + backend + "'");
    }
    plugin = it->second;
  }
  ModelHandle handle;
  handle.id = next_id_.fetch_add(1);
  handle.model_id = model_id;
  handle.backend = backend;
  handle.instance = plugin.make(model_id, config);
  return handle;
}

BackendRegistry& builtin_registry() {
  static BackendRegistry* registry = [] {
    auto* r = new BackendRegistry();
    register_builtin_backends(*r);
    return r;
  }();
  return *registry;
}

}  // namespace oricf
