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

#include "oricf/backend.hpp"
#include "oricf/text_template.hpp"
#include "oricf/wire.hpp"
#include "test_util.hpp"

using namespace oricf;

namespace {

// Independent of the production tile scan: walks every pixel of every
// tile one by one and applies the documented rule (mean over all
// channels, strict > threshold, score = mean / 255).
DetectionSet brute_force_detector(const Tensor& image, uint32_t threshold, uint32_t block) {
  DetectionSet out;
  const uint32_t h = image.shape[0], w = image.shape[1], c = image.shape[2];
  for (uint32_t ty = 0; ty * block + block <= h; ++ty) {
    for (uint32_t tx = 0; tx * block + block <= w; ++tx) {
      uint64_t sum = 0;
      uint64_t count = 0;
      for (uint32_t y = ty * block; y < (ty + 1) * block; ++y) {
        for (uint32_t x = tx * block; x < (tx + 1) * block; ++x) {
          for (uint32_t ch = 0; ch < c; ++ch) {
            sum += image.data[(static_cast<size_t>(y) * w + x) * c + ch];
            ++count;
          }
        }
      }
      if (sum > static_cast<uint64_t>(threshold) * count) {
        Detection det;
        det.label = "person";
        det.score = static_cast<float>(static_cast<double>(sum) /
                                       (static_cast<double>(count) * 255.0));
        det.bbox = {static_cast<float>(static_cast<double>(tx * block) / w),
                    static_cast<float>(static_cast<double>(ty * block) / h),
                    static_cast<float>(static_cast<double>((tx + 1) * block) / w),
                    static_cast<float>(static_cast<double>((ty + 1) * block) / h)};
        out.items.push_back(std::move(det));
      }
    }
  }
  return out;
}

ModelHandle load_builtin(const std::string& model, const std::string& backend,
                         const Config& config) {
  return builtin_registry().load_model(model, backend, config);
}

}  // namespace

TEST_CASE("stub detector: one bright tile in a 16x16x3 image") {
  Tensor img = Tensor::zeros(Dtype::U8, {16, 16, 3});
  for (uint32_t y = 0; y < 8; ++y) {
    for (uint32_t x = 0; x < 8; ++x) {
      for (uint32_t c = 0; c < 3; ++c) img.data[(y * 16 + x) * 3 + c] = 255;
    }
  }
  DetectionSet d = stub_detector_infer(img, 200, 8);
  REQUIRE(d.items.size() == 1);
  CHECK(d.items[0].label == "person");
  CHECK(d.items[0].score == 1.0f);
  CHECK(d.items[0].bbox == std::array<float, 4>{0.0f, 0.0f, 0.5f, 0.5f});
}

TEST_CASE("stub detector: all-255 16x16x1 has 4 detections, zeros none") {
  Tensor bright = Tensor::zeros(Dtype::U8, {16, 16, 1});
  std::fill(bright.data.begin(), bright.data.end(), 255);
  CHECK(stub_detector_infer(bright, 200, 8).items.size() == 4);
  Tensor dark = Tensor::zeros(Dtype::U8, {64, 64, 3});
  CHECK(stub_detector_infer(dark, 200, 8).items.empty());
}

TEST_CASE("stub detector: exact threshold is not a detection") {
  Tensor img = Tensor::zeros(Dtype::U8, {8, 8, 1});
  std::fill(img.data.begin(), img.data.end(), 200);
  CHECK(stub_detector_infer(img, 200, 8).items.empty());
  std::fill(img.data.begin(), img.data.end(), 201);
  CHECK(stub_detector_infer(img, 200, 8).items.size() == 1);
}

TEST_CASE("stub detector: trailing partial tiles are ignored") {
  Tensor img = Tensor::zeros(Dtype::U8, {12, 20, 1});
  std::fill(img.data.begin(), img.data.end(), 255);
  // 12x20 with block 8 -> 1x2 full tiles.
  CHECK(stub_detector_infer(img, 0, 8).items.size() == 2);
}

TEST_CASE("stub detector rejects wrong rank or dtype") {
  CHECK_THROWS_AS(stub_detector_infer(Tensor::zeros(Dtype::F32, {8, 8, 1}), 200, 8),
                  BackendError);
  CHECK_THROWS_AS(stub_detector_infer(Tensor::zeros(Dtype::U8, {8, 8}), 200, 8), BackendError);
}

TEST_CASE("stub detector equals brute-force oracle on 200 random images") {
  std::mt19937 rng(4242);
  for (int i = 0; i < 200; ++i) {
    Tensor img = testutil::random_image(rng, 64);
    // Bias some tiles bright so detections actually fire.
    if (i % 2 == 0) {
      for (size_t p = 0; p < img.data.size(); ++p) {
        if (rng() % 3 == 0) img.data[p] = 255;
      }
    }
    uint32_t threshold = rng() % 256;
    DetectionSet expected = brute_force_detector(img, threshold, 8);
    DetectionSet actual = stub_detector_infer(img, threshold, 8);
    REQUIRE_MESSAGE(actual == expected, "image " << i << " threshold " << threshold);
  }
}

TEST_CASE("registry: load, unknown backend, duplicate loads behave identically") {
  ModelHandle det = load_builtin("person-detection-0200", "stub-detector",
                                 {{"threshold", "200"}});
  CHECK(det.id != 0);
  CHECK(det.backend == "stub-detector");

  CHECK_THROWS_AS(load_builtin("x", "no-such-backend", {}), BackendError);

  ModelHandle again = load_builtin("person-detection-0200", "stub-detector",
                                   {{"threshold", "200"}});
  CHECK(again.id != det.id);
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    Payload img{testutil::random_image(rng, 32)};
    InferenceContext ctx;
    CHECK(encode_payload(det.infer({img}, ctx)) == encode_payload(again.infer({img}, ctx)));
  }
}

TEST_CASE("registry: invalid config values are rejected at load") {
  CHECK_THROWS_AS(load_builtin("m", "stub-detector", {{"threshold", "256"}}), BackendError);
  CHECK_THROWS_AS(load_builtin("m", "stub-detector", {{"threshold", "abc"}}), BackendError);
  CHECK_THROWS_AS(load_builtin("m", "template-llm", {}), BackendError);
  CHECK_THROWS_AS(load_builtin("m", "template-llm", {{"template", "{oops"}}), BackendError);
  CHECK_THROWS_AS(load_builtin("m", "token-asr", {{"vocab", "nope"}}), BackendError);
  // Unrecognized keys are ignored so backends stay swappable.
  CHECK_NOTHROW(load_builtin("m", "identity-detections", {{"threshold", "200"}}));
}

TEST_CASE("identity echoes text") {
  ModelHandle echo = load_builtin("m", "identity", {});
  InferenceContext ctx;
  Payload out = echo.infer({Text{"hi"}}, ctx);
  CHECK(out == Payload{Text{"hi"}});
  CHECK_THROWS_AS(echo.infer({Scalar{1}}, ctx), BackendError);
}

TEST_CASE("identity-detections accepts images and emits an empty set") {
  ModelHandle ident = load_builtin("m", "identity-detections", {});
  InferenceContext ctx;
  Payload out = ident.infer({Tensor::zeros(Dtype::U8, {16, 16, 3})}, ctx);
  CHECK(out == Payload{DetectionSet{}});
}

TEST_CASE("template llm renders query and context placeholders") {
  ModelHandle llm =
      load_builtin("m", "template-llm", {{"template", "I see {chan:/human_counter} people."}});
  InferenceContext ctx;
  ctx.latest["/human_counter"] = Scalar{2.0};
  CHECK(llm.infer({Text{"How many people do you see?"}}, ctx) ==
        Payload{Text{"I see 2 people."}});

  InferenceContext empty;
  CHECK(llm.infer({Text{"q"}}, empty) == Payload{Text{"I see <unknown> people."}});

  ModelHandle echo = load_builtin("m", "template-llm", {{"template", "{query}"}});
  CHECK(echo.infer({Text{"hello"}}, empty) == Payload{Text{"hello"}});

  CHECK(llm.instance->context_channels() == std::vector<std::string>{"/human_counter"});
}

TEST_CASE("template grammar rejects malformed placeholders") {
  CHECK_THROWS_AS(TextTemplate::parse("{unclosed"), BackendError);
  CHECK_THROWS_AS(TextTemplate::parse("{bogus}"), BackendError);
  CHECK_THROWS_AS(TextTemplate::parse("{chan:}"), BackendError);
  CHECK_NOTHROW(TextTemplate::parse("plain text"));
  CHECK_NOTHROW(TextTemplate::parse("{query} and {chan:a/b}"));
}

TEST_CASE("token asr looks up vocab by first sample") {
  ModelHandle asr = load_builtin("m", "token-asr", {{"vocab", R"(["how","many"])"}});
  InferenceContext ctx;
  CHECK(asr.infer({AudioChunk{16000, {1, 0, 0}}}, ctx) == Payload{Text{"many"}});
  CHECK(asr.infer({AudioChunk{16000, {99}}}, ctx) == Payload{Text{""}});
  CHECK_THROWS_AS(asr.infer({AudioChunk{16000, {}}}, ctx), BackendError);
  CHECK_THROWS_AS(asr.infer({AudioChunk{16000, {-1}}}, ctx), BackendError);
}

TEST_CASE("kind discipline: outputs always match the declared output kind") {
  std::mt19937 rng(31);
  InferenceContext ctx;
  struct Case {
    const char* backend;
    Config config;
    Payload input;
  };
  std::vector<Case> cases = {
      {"stub-detector", {}, testutil::random_image(rng, 32)},
      {"identity-detections", {}, testutil::random_image(rng, 16)},
      {"identity", {}, Text{"t"}},
      {"template-llm", {{"template", "x"}}, Text{"t"}},
      {"token-asr", {{"vocab", "[]"}}, AudioChunk{8000, {0}}},
  };
  for (const Case& c : cases) {
    ModelHandle handle = load_builtin("m", c.backend, c.config);
    const BackendDescriptor* desc = builtin_registry().descriptor(c.backend);
    REQUIRE(desc != nullptr);
    Payload out = handle.infer({c.input}, ctx);
    CHECK(kind_accepts(desc->output_kind, out));
  }
}

TEST_CASE("determinism: repeated infer yields byte-identical payloads") {
  std::mt19937 rng(11);
  InferenceContext ctx;
  ctx.latest["c"] = Scalar{3.5};

  ModelHandle det = load_builtin("m", "stub-detector", {});
  ModelHandle llm = load_builtin("m", "template-llm", {{"template", "{query}/{chan:c}"}});
  ModelHandle asr = load_builtin("m", "token-asr", {{"vocab", R"(["a","b"])"}});

  for (int i = 0; i < 50; ++i) {
    Payload img{testutil::random_image(rng, 48)};
    CHECK(encode_payload(det.infer({img}, ctx)) == encode_payload(det.infer({img}, ctx)));
    Payload q{Text{"q" + std::to_string(i)}};
    CHECK(encode_payload(llm.infer({q}, ctx)) == encode_payload(llm.infer({q}, ctx)));
    Payload a{AudioChunk{8000, {static_cast<int16_t>(i % 3)}}};
    CHECK(encode_payload(asr.infer({a}, ctx)) == encode_payload(asr.infer({a}, ctx)));
  }
}
