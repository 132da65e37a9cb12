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

#include "oricf/worker.hpp"

#include <sys/socket.h>

#include <cstring>

#include "oricf/log.hpp"

namespace oricf {

bool read_frame_from(Socket& socket, WireFrame& out) {
  uint8_t header[kFrameHeaderSize];
  if (!socket.read_exact(header)) return false;
  ByteReader r(std::span<const uint8_t>(header + 4, kFrameHeaderSize - 4));
  uint8_t version = r.u8();
  uint8_t type = r.u8();
  uint64_t request_id = r.u64();
  uint32_t len = r.u32();
  if (std::memcmp(header, kWireMagic, 4) != 0) {
    throw FrameError(0, WireErrorCode::MalformedPayload, "bad magic");
  }
  if (version != kWireVersion) {
    throw FrameError(request_id, WireErrorCode::UnsupportedVersion,
                     "unsupported protocol version " + std::to_string(version));
  }
  if (len > kMaxWirePayload) {
    throw FrameError(request_id, WireErrorCode::PayloadTooLarge,
                     "payload length exceeds 64 MiB cap");
  }
  out.msg_type = static_cast<MsgType>(type);
  out.request_id = request_id;
  out.payload.resize(len);
  if (len > 0 && !socket.read_exact(out.payload)) {
    throw TransportError("connection closed mid-frame");
  }
  return true;
}

void write_frame_to(Socket& socket, const WireFrame& frame) {
  socket.write_all(encode_frame(frame));
}

WorkerServer::WorkerServer(const std::string& host, uint16_t port,
                           const BackendRegistry& registry)
    : registry_(registry), listener_(host, port) {
  accept_thread_ = std::thread([this] { accept_loop(); });
}

WorkerServer::~WorkerServer() { stop(); }

void WorkerServer::stop() {
  {
    std::lock_guard lock(mu_);
    if (stopping_) return;
    stopping_ = true;
    for (const auto& [id, fd] : live_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  listener_.close();
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(mu_);
    threads.swap(conn_threads_);
  }
  for (std::thread& t : threads) {
    if (t.joinable()) t.join();
  }
}

void WorkerServer::accept_loop() {
  while (true) {
    Socket socket = listener_.accept();
    if (!socket.valid()) break;
    std::lock_guard lock(mu_);
    if (stopping_) break;
    uint64_t conn_id = next_conn_id_++;
    live_fds_[conn_id] = socket.fd();
    conn_threads_.emplace_back(
        [this, conn_id](Socket s) { serve_connection(std::move(s), conn_id); },
        std::move(socket));
  }
}

void WorkerServer::serve_connection(Socket socket, uint64_t conn_id) {
  log_info("worker: connection " + std::to_string(conn_id) + " open");
  std::map<uint32_t, ModelHandle> handles;
  uint32_t next_handle = 1;

  auto reply_error = [&](uint64_t request_id, WireErrorCode code, const std::string& message) {
    WireFrame frame;
    frame.msg_type = MsgType::Error;
    frame.request_id = request_id;
    frame.payload = encode_error({code, message});
    write_frame_to(socket, frame);
  };

  try {
    WireFrame request;
    while (read_frame_from(socket, request)) {
      WireFrame response;
      response.request_id = request.request_id;
      switch (request.msg_type) {
        case MsgType::Ping: {
          response.msg_type = MsgType::Pong;
          write_frame_to(socket, response);
          break;
        }
        case MsgType::LoadModel: {
          try {
            LoadModelBody body = decode_load_model(request.payload);
            ModelHandle handle = registry_.load_model(body.model_id, body.backend, body.config);
            uint32_t id = next_handle++;
            handles.emplace(id, std::move(handle));
            response.msg_type = MsgType::LoadOk;
            response.payload = encode_load_ok(id);
            write_frame_to(socket, response);
          } catch (const DecodeError& e) {
            reply_error(request.request_id, WireErrorCode::MalformedPayload, e.what());
          } catch (const BackendError& e) {
            std::string what = e.what();
            WireErrorCode code = what.find("unknown backend") != std::string::npos
                                     ? WireErrorCode::UnknownBackend
                                     : WireErrorCode::BackendFailure;
            reply_error(request.request_id, code, what);
          }
          break;
        }
        case MsgType::Infer: {
          try {
            InferBody body = decode_infer(request.payload);
            auto it = handles.find(body.handle);
            if (it == handles.end()) {
              reply_error(request.request_id, WireErrorCode::UnknownModelHandle,
                          "unknown model handle " + std::to_string(body.handle));
              break;
            }
            InferenceContext ctx;
            ctx.latest = std::move(body.ctx);
            Payload result = it->second.infer(body.inputs, ctx);
            response.msg_type = MsgType::InferOk;
            response.payload = encode_payload(result);
            write_frame_to(socket, response);
          } catch (const DecodeError& e) {
            reply_error(request.request_id, WireErrorCode::MalformedPayload, e.what());
          } catch (const BackendError& e) {
            reply_error(request.request_id, WireErrorCode::BackendFailure, e.what());
          }
          break;
        }
        default:
          // Response-typed or unknown-typed frames are not valid requests.
          reply_error(request.request_id, WireErrorCode::MalformedPayload,
                      "unexpected message type " +
                          std::to_string(static_cast<uint8_t>(request.msg_type)));
          break;
      }
    }
  } catch (const FrameError& e) {
    // Framing is broken; answer once and drop the connection.
    try {
      reply_error(e.request_id, e.code, e.what());
    } catch (const TransportError&) {
    }
  } catch (const TransportError& e) {
    log_debug(std::string("worker: connection transport error: ") + e.what());
  }

  // Deregister before closing so stop() never shuts down a recycled fd.
  {
    std::lock_guard lock(mu_);
    live_fds_.erase(conn_id);
  }
  socket.close();
  log_info("worker: connection " + std::to_string(conn_id) + " closed");
}

}  // namespace oricf
