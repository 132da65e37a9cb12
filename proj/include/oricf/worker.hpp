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

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "oricf/backend.hpp"
#include "oricf/net.hpp"
#include "oricf/wire.hpp"

namespace oricf {

/// Standalone inference worker speaking the offload wire protocol.
/// Accepts concurrent connections; model handles are per-connection.
/// Every failure is answered with an Error frame carrying the request id;
/// bad magic/version closes the connection after the Error frame.
class WorkerServer {
 public:
  WorkerServer(const std::string& host, uint16_t port, const BackendRegistry& registry);
  ~WorkerServer();
  WorkerServer(const WorkerServer&) = delete;
  WorkerServer& operator=(const WorkerServer&) = delete;

  /// Actual bound port (useful when constructed with port 0).
  uint16_t port() const { return listener_.port(); }

  /// Stops accepting, closes live connections, joins all threads.
  void stop();

 private:
  void accept_loop();
  void serve_connection(Socket socket, uint64_t conn_id);

  const BackendRegistry& registry_;
  Listener listener_;
  std::thread accept_thread_;
  std::mutex mu_;
  bool stopping_ = false;
  uint64_t next_conn_id_ = 0;
  std::map<uint64_t, int> live_fds_;
  std::vector<std::thread> conn_threads_;
};

/// Connection-fatal framing problem (bad magic/version/oversize). Carries
/// the request id of the offending frame when it could be parsed.
class FrameError : public DecodeError {
 public:
  FrameError(uint64_t request_id, WireErrorCode code, const std::string& what)
      : DecodeError(what), request_id(request_id), code(code) {}
  uint64_t request_id;
  WireErrorCode code;
};

/// Reads one frame from the socket. Returns false on clean EOF. The raw
/// message type byte is preserved (the caller decides how to answer
/// unknown types). Throws FrameError on magic/version/length violations,
/// TransportError on I/O failure.
bool read_frame_from(Socket& socket, WireFrame& out);
void write_frame_to(Socket& socket, const WireFrame& frame);

}  // namespace oricf
