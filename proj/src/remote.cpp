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

#include "oricf/remote.hpp"

#include <thread>

#include "oricf/log.hpp"
#include "oricf/worker.hpp"

namespace oricf {

RemoteModelProxy::RemoteModelProxy(std::string host, uint16_t port, std::string model_id,
                                   std::string backend, Config config, RetryPolicy retry)
    : host_(std::move(host)),
      port_(port),
      model_id_(std::move(model_id)),
      backend_(std::move(backend)),
      config_(std::move(config)),
      retry_(retry) {
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.attempts; ++attempt) {
    try {
      connect_and_load();
      return;
    } catch (const TransportError& e) {
      last_error = e.what();
      log_warn("remote model at " + address() + " attempt " + std::to_string(attempt) +
               "/" + std::to_string(retry_.attempts) + " failed: " + last_error);
      if (attempt < retry_.attempts) std::this_thread::sleep_for(retry_.backoff);
    }
  }
  throw TransportError("worker " + address() + " unreachable after " +
                       std::to_string(retry_.attempts) + " attempts: " + last_error);
}

void RemoteModelProxy::connect_and_load() {
  socket_ = Socket::connect(host_, port_);
  connected_ = true;
  WireFrame request;
  request.msg_type = MsgType::LoadModel;
  request.request_id = next_request_id_++;
  request.payload = encode_load_model({model_id_, backend_, config_});
  write_frame_to(socket_, request);
  WireFrame response;
  while (true) {
    if (!read_frame_from(socket_, response)) {
      connected_ = false;
      throw TransportError("worker closed connection during load");
    }
    if (response.request_id == request.request_id) break;
  }
  if (response.msg_type == MsgType::Error) {
    ErrorBody err = decode_error(response.payload);
    connected_ = false;
    socket_.close();
    throw BackendError("remote load failed (code " +
                       std::to_string(static_cast<uint16_t>(err.code)) + "): " + err.message);
  }
  if (response.msg_type != MsgType::LoadOk) {
    connected_ = false;
    throw TransportError("unexpected response to LoadModel");
  }
  remote_handle_ = decode_load_ok(response.payload);
}

WireFrame RemoteModelProxy::roundtrip(MsgType type, std::vector<uint8_t> payload) {
  WireFrame request;
  request.msg_type = type;
  request.request_id = next_request_id_++;
  request.payload = std::move(payload);
  write_frame_to(socket_, request);
  WireFrame response;
  while (true) {
    if (!read_frame_from(socket_, response)) {
      throw TransportError("worker closed connection");
    }
    if (response.request_id == request.request_id) return response;
    // Pipelined responses for other ids are legal; with one in-flight
    // request per proxy there is nothing to hand them to.
    log_debug("remote proxy: skipping response for id " +
              std::to_string(response.request_id));
  }
}

Payload RemoteModelProxy::infer(const std::vector<Payload>& inputs,
                                const InferenceContext& ctx) {
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.attempts; ++attempt) {
    try {
      if (!connected_) connect_and_load();
      InferBody body;
      body.handle = remote_handle_;
      body.inputs = inputs;
      body.ctx = ctx.latest;
      WireFrame response = roundtrip(MsgType::Infer, encode_infer(body));
      if (response.msg_type == MsgType::Error) {
        ErrorBody err = decode_error(response.payload);
        throw BackendError("remote infer failed (code " +
                           std::to_string(static_cast<uint16_t>(err.code)) +
                           "): " + err.message);
      }
      if (response.msg_type != MsgType::InferOk) {
        throw TransportError("unexpected response to Infer");
      }
      return decode_payload_exact(response.payload);
    } catch (const TransportError& e) {
      last_error = e.what();
      connected_ = false;
      socket_.close();
      log_warn("remote infer at " + address() + " attempt " + std::to_string(attempt) + "/" +
               std::to_string(retry_.attempts) + " failed: " + last_error);
      if (attempt < retry_.attempts) std::this_thread::sleep_for(retry_.backoff);
    }
  }
  throw TransportError("worker " + address() + " unreachable after " +
                       std::to_string(retry_.attempts) + " attempts: " + last_error);
}

}  // namespace oricf
