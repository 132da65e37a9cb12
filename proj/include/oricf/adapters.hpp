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
#include <memory>
#include <optional>
#include <string>

#include "oricf/catalog.hpp"
#include "oricf/errors.hpp"
#include "oricf/payload.hpp"

namespace oricf {

/// Pull-style data source. next() produces payloads until exhaustion
/// (nullopt). request_stop() asks a blocked next() to give up soon.
class SourceAdapter {
 public:
  virtual ~SourceAdapter() = default;
  virtual std::optional<Payload> next() = 0;
  virtual void request_stop() {}
};

/// Push-style data drain.
class SinkAdapter {
 public:
  virtual ~SinkAdapter() = default;
  virtual void write(const Payload& payload) = 0;
  virtual void close() {}
};

/// Registration record: validation info plus the factories. A factory is
/// null when the adapter cannot play that role. Factories throw Error on
/// bad params or failed I/O setup.
struct AdapterPlugin {
  std::string name;
  AdapterValidationInfo info;
  std::function<std::unique_ptr<SourceAdapter>(const Config&)> make_source;
  std::function<std::unique_ptr<SinkAdapter>(const Config&)> make_sink;
};

class AdapterRegistry {
 public:
  void register_adapter(AdapterPlugin plugin);
  const AdapterPlugin* find(const std::string& name) const;
  AdapterCatalog catalog() const;

  std::unique_ptr<SourceAdapter> make_source(const std::string& name, const Config& params) const;
  std::unique_ptr<SinkAdapter> make_sink(const std::string& name, const Config& params) const;

 private:
  std::map<std::string, AdapterPlugin> plugins_;
};

/// Process-wide registry with the built-in adapters: synthetic-frames,
/// file, stdin-text, stdout-text, tcp-text, audio-script.
AdapterRegistry& builtin_adapters();
const AdapterCatalog& builtin_adapter_catalog();
void register_builtin_adapters(AdapterRegistry& registry);

}  // namespace oricf
