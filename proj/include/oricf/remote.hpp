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

#include <chrono>
#include <cstdint>
#include <string>

#include "oricf/backend.hpp"
#include "oricf/net.hpp"
#include "oricf/wire.hpp"

namespace oricf {

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds backoff{200};
};

/// Client side of the offload protocol: connects to a worker, loads one
/// model remotely, and satisfies the local infer contract. Request ids
/// are strictly increasing per connection; responses are matched by id.
/// Transport failures trigger reconnect + reload up to the retry policy,
/// then surface as TransportError (the orchestrator marks the node
/// failed). Worker-side Error frames surface as BackendError.
class RemoteModelProxy {
 public:
  RemoteModelProxy(std::string host, uint16_t port, std::string model_id,
                   std::string backend, Config config, RetryPolicy retry = {});

  Payload infer(const std::vector<Payload>& inputs, const InferenceContext& ctx);

  std::string address() const { return host_ + ":" + std::to_string(port_); }

 private:
  void connect_and_load();
  WireFrame roundtrip(MsgType type, std::vector<uint8_t> payload);

  std::string host_;
  uint16_t port_;
  std::string model_id_;
  std::string backend_;
  Config config_;
  RetryPolicy retry_;
  Socket socket_;
  bool connected_ = false;
  uint32_t remote_handle_ = 0;
  uint64_t next_request_id_ = 1;
};

}  // namespace oricf
