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

#include <doctest.h>

#include <chrono>
#include <functional>
#include <memory>
#include <set>
#include <thread>

#include "oricf/backend.hpp"
#include "oricf/remote.hpp"
#include "oricf/worker.hpp"
#include "test_util.hpp"

using namespace oricf;

namespace {

WireFrame request_frame(MsgType type, uint64_t id, std::vector<uint8_t> payload = {}) {
  WireFrame f;
  f.msg_type = type;
  f.request_id = id;
  f.payload = std::move(payload);
  return f;
}

}  // namespace

TEST_CASE("worker answers ping with pong echoing the request id") {
  WorkerServer worker("127.0.0.1", 0, builtin_registry());
  Socket client = Socket::connect("127.0.0.1", worker.port());
  write_frame_to(client, request_frame(MsgType::Ping, 7));
  WireFrame response;
  REQUIRE(read_frame_from(client, response));
  CHECK(response.msg_type == MsgType::Pong);
  CHECK(response.request_id == 7);
  CHECK(response.payload.empty());
}

TEST_CASE("worker: load then infer matches local infer byte for byte") {
  WorkerServer worker("127.0.0.1", 0, builtin_registry());
  Socket client = Socket::connect("127.0.0.1", worker.port());

  LoadModelBody load{"person-detection-0200", "stub-detector", {{"threshold", "200"}}};
  write_frame_to(client, request_frame(MsgType::LoadModel, 1, encode_load_model(load)));
  WireFrame response;
  REQUIRE(read_frame_from(client, response));
  REQUIRE(response.msg_type == MsgType::LoadOk);
  uint32_t handle = decode_load_ok(response.payload);

  Tensor img = Tensor::zeros(Dtype::U8, {16, 16, 3});
  for (uint32_t y = 0; y < 8; ++y) {
    for (uint32_t x = 0; x < 8; ++x) {
      for (uint32_t c = 0; c < 3; ++c) img.data[(y * 16 + x) * 3 + c] = 255;
    }
  }
  InferBody infer;
  infer.handle = handle;
  infer.inputs.push_back(img);
  write_frame_to(client, request_frame(MsgType::Infer, 2, encode_infer(infer)));
  REQUIRE(read_frame_from(client, response));
  REQUIRE(response.msg_type == MsgType::InferOk);
  Payload remote_result = decode_payload_exact(response.payload);

  ModelHandle local = builtin_registry().load_model("person-detection-0200", "stub-detector",
                                                    {{"threshold", "200"}});
  Payload local_result = local.infer({Payload{img}}, InferenceContext{});
  CHECK(encode_payload(remote_result) == encode_payload(local_result));
  const auto& detections = std::get<DetectionSet>(remote_result);
  CHECK(detections.items.size() == 1);
}

TEST_CASE("worker: unknown handle answers error code 2 with matching id") {
  WorkerServer worker("127.0.0.1", 0, builtin_registry());
  Socket client = Socket::connect("127.0.0.1", worker.port());
  InferBody infer;
  infer.handle = 999;
  infer.inputs.push_back(Text{"x"});
  write_frame_to(client, request_frame(MsgType::Infer, 5, encode_infer(infer)));
  WireFrame response;
  REQUIRE(read_frame_from(client, response));
  CHECK(response.msg_type == MsgType::Error);
  CHECK(response.request_id == 5);
  CHECK(decode_error(response.payload).code == WireErrorCode::UnknownModelHandle);
}

TEST_CASE("worker: unknown backend answers error code 3") {
  WorkerServer worker("127.0.0.1", 0, builtin_registry());
  Socket client = Socket::connect("127.0.0.1", worker.port());
  LoadModelBody load{"m", "no-such-backend", {}};
  write_frame_to(client, request_frame(MsgType::LoadModel, 9, encode_load_model(load)));
  WireFrame response;
  REQUIRE(read_frame_from(client, response));
  CHECK(response.msg_type == MsgType::Error);
  CHECK(decode_error(response.payload).code == WireErrorCode::UnknownBackend);
}

TEST_CASE("worker: handles are per-connection") {
  WorkerServer worker("127.0.0.1", 0, builtin_registry());
  Socket first = Socket::connect("127.0.0.1", worker.port());
  LoadModelBody load{"m", "identity", {}};
  write_frame_to(first, request_frame(MsgType::LoadModel, 1, encode_load_model(load)));
  WireFrame response;
  REQUIRE(read_frame_from(first, response));
  uint32_t handle = decode_load_ok(response.payload);

  Socket second = Socket::connect("127.0.0.1", worker.port());
  InferBody infer;
  infer.handle = handle;
  infer.inputs.push_back(Text{"x"});
  write_frame_to(second, request_frame(MsgType::Infer, 1, encode_infer(infer)));
  REQUIRE(read_frame_from(second, response));
  CHECK(response.msg_type == MsgType::Error);
  CHECK(decode_error(response.payload).code == WireErrorCode::UnknownModelHandle);
}

TEST_CASE("worker: two pipelined requests answered with both ids") {
  WorkerServer worker("127.0.0.1", 0, builtin_registry());
  Socket client = Socket::connect("127.0.0.1", worker.port());
  // Write both requests before reading any response.
  write_frame_to(client, request_frame(MsgType::Ping, 1));
  write_frame_to(client, request_frame(MsgType::Ping, 2));
  std::set<uint64_t> ids;
  WireFrame response;
  REQUIRE(read_frame_from(client, response));
  ids.insert(response.request_id);
  REQUIRE(read_frame_from(client, response));
  ids.insert(response.request_id);
  CHECK(ids == std::set<uint64_t>{1, 2});
}

TEST_CASE("worker: bad magic and bad version answer an error, then close") {
  WorkerServer worker("127.0.0.1", 0, builtin_registry());
  {
    Socket client = Socket::connect("127.0.0.1", worker.port());
    std::vector<uint8_t> junk = encode_frame(request_frame(MsgType::Ping, 3));
    junk[0] = 'X';
    client.write_all(junk);
    WireFrame response;
    REQUIRE(read_frame_from(client, response));
    CHECK(response.msg_type == MsgType::Error);
    CHECK(decode_error(response.payload).code == WireErrorCode::MalformedPayload);
    CHECK_FALSE(read_frame_from(client, response));  // connection closed
  }
  {
    Socket client = Socket::connect("127.0.0.1", worker.port());
    std::vector<uint8_t> wrong_version = encode_frame(request_frame(MsgType::Ping, 4));
    wrong_version[4] = 2;
    client.write_all(wrong_version);
    WireFrame response;
    REQUIRE(read_frame_from(client, response));
    CHECK(response.msg_type == MsgType::Error);
    CHECK(response.request_id == 4);
    CHECK(decode_error(response.payload).code == WireErrorCode::UnsupportedVersion);
    CHECK_FALSE(read_frame_from(client, response));
  }
}

TEST_CASE("worker: malformed request body answers code 4 and keeps serving") {
  WorkerServer worker("127.0.0.1", 0, builtin_registry());
  Socket client = Socket::connect("127.0.0.1", worker.port());
  write_frame_to(client, request_frame(MsgType::Infer, 11, {0x01, 0x02}));
  WireFrame response;
  REQUIRE(read_frame_from(client, response));
  CHECK(response.msg_type == MsgType::Error);
  CHECK(decode_error(response.payload).code == WireErrorCode::MalformedPayload);
  // Still alive:
  write_frame_to(client, request_frame(MsgType::Ping, 12));
  REQUIRE(read_frame_from(client, response));
  CHECK(response.msg_type == MsgType::Pong);
}

TEST_CASE("proxy satisfies the local infer contract") {
  WorkerServer worker("127.0.0.1", 0, builtin_registry());
  RemoteModelProxy proxy("127.0.0.1", worker.port(), "m", "identity", {});
  Payload out = proxy.infer({Text{"x"}}, InferenceContext{});
  CHECK(out == Payload{Text{"x"}});
}

TEST_CASE("proxy: backend failures surface as BackendError, not transport") {
  WorkerServer worker("127.0.0.1", 0, builtin_registry());
  RemoteModelProxy proxy("127.0.0.1", worker.port(), "m", "identity", {});
  CHECK_THROWS_AS(proxy.infer({Scalar{1.0}}, InferenceContext{}), BackendError);
  CHECK_THROWS_AS(
      RemoteModelProxy("127.0.0.1", worker.port(), "m", "no-such-backend", {}),
      BackendError);
}

TEST_CASE("offload equivalence: remote == local for every reference backend") {
  WorkerServer worker("127.0.0.1", 0, builtin_registry());
  std::mt19937 rng(60321);
  InferenceContext ctx;
  ctx.latest["/human_counter"] = Scalar{2.0};
  ctx.latest["aux"] = Text{"ctx"};

  struct Case {
    const char* backend;
    Config config;
    std::function<Payload(std::mt19937&)> input;
  };
  std::vector<Case> cases = {
      {"stub-detector",
       {{"threshold", "128"}},
       [](std::mt19937& r) { return Payload{testutil::random_image(r, 64)}; }},
      {"identity-detections",
       {},
       [](std::mt19937& r) { return Payload{testutil::random_image(r, 32)}; }},
      {"identity", {}, [](std::mt19937& r) {
         return Payload{Text{"t" + std::to_string(r() % 1000)}};
       }},
      {"template-llm",
       {{"template", "q={query} n={chan:/human_counter} a={chan:aux} x={chan:missing}"}},
       [](std::mt19937& r) { return Payload{Text{"Q" + std::to_string(r() % 100)}}; }},
      {"token-asr", {{"vocab", R"(["how","many","people","do","you","see"])"}},
       [](std::mt19937& r) {
         AudioChunk a;
         a.sample_rate_hz = 16000;
         a.samples = {static_cast<int16_t>(r() % 8), 0, 0};
         return Payload{a};
       }},
  };

  for (const Case& c : cases) {
    ModelHandle local = builtin_registry().load_model("m", c.backend, c.config);
    RemoteModelProxy proxy("127.0.0.1", worker.port(), "m", c.backend, c.config);
    for (int i = 0; i < 100; ++i) {
      Payload input = c.input(rng);
      Payload local_out = local.infer({input}, ctx);
      Payload remote_out = proxy.infer({input}, ctx);
      REQUIRE_MESSAGE(encode_payload(local_out) == encode_payload(remote_out),
                      c.backend << " diverged on case " << i);
    }
  }
}

TEST_CASE("proxy: connection to a closed port fails after retries") {
  // Grab a port that is then closed again.
  uint16_t dead_port;
  {
    Listener probe("127.0.0.1", 0);
    dead_port = probe.port();
  }
  RetryPolicy fast{3, std::chrono::milliseconds(10)};
  auto start = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(RemoteModelProxy("127.0.0.1", dead_port, "m", "identity", {}, fast),
                  TransportError);
  auto elapsed = std::chrono::steady_clock::now() - start;
  // Two backoffs between three attempts.
  CHECK(elapsed >= std::chrono::milliseconds(20));
}

TEST_CASE("proxy: worker killed mid-run surfaces a transport failure after retries") {
  auto worker = std::make_unique<WorkerServer>("127.0.0.1", 0, builtin_registry());
  RetryPolicy fast{3, std::chrono::milliseconds(10)};
  RemoteModelProxy proxy("127.0.0.1", worker->port(), "m", "identity", {}, fast);
  CHECK(proxy.infer({Text{"a"}}, InferenceContext{}) == Payload{Text{"a"}});
  worker->stop();
  worker.reset();
  CHECK_THROWS_AS(proxy.infer({Text{"b"}}, InferenceContext{}), TransportError);
}

TEST_CASE("proxy reconnects when the worker comes back") {
  uint16_t port;
  {
    Listener probe("127.0.0.1", 0);
    port = probe.port();
  }
  auto worker = std::make_unique<WorkerServer>("127.0.0.1", port, builtin_registry());
  RetryPolicy fast{5, std::chrono::milliseconds(50)};
  RemoteModelProxy proxy("127.0.0.1", port, "m", "identity", {}, fast);
  CHECK(proxy.infer({Text{"one"}}, InferenceContext{}) == Payload{Text{"one"}});
  worker->stop();
  worker.reset();
  // Bring a fresh worker up on the same port; the proxy reloads its model.
  std::thread reviver([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(60));
    worker = std::make_unique<WorkerServer>("127.0.0.1", port, builtin_registry());
  });
  Payload out = proxy.infer({Text{"two"}}, InferenceContext{});
  reviver.join();
  CHECK(out == Payload{Text{"two"}});
}
