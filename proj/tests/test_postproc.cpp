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

#include <cmath>
#include <random>

#include "oricf/postproc.hpp"
#include "oricf/wire.hpp"
#include "test_util.hpp"

using namespace oricf;

namespace {

DetectionSet make_set(std::initializer_list<Detection> items) {
  DetectionSet d;
  d.items = items;
  return d;
}

// Pixel-level predicate for annotate: is (x, y) on the border of the
// denormalized box of any detection?
bool on_any_border(uint32_t x, uint32_t y, const DetectionSet& d, uint32_t w, uint32_t h) {
  auto denorm = [](float v, uint32_t limit) -> int64_t {
    double scaled = std::floor(static_cast<double>(v) * limit + 0.5);
    if (scaled < 0) return 0;
    if (scaled > limit - 1) return limit - 1;
    return static_cast<int64_t>(scaled);
  };
  for (const Detection& det : d.items) {
    int64_t x0 = denorm(det.bbox[0], w), y0 = denorm(det.bbox[1], h);
    int64_t x1 = denorm(det.bbox[2], w), y1 = denorm(det.bbox[3], h);
    bool x_in = x >= x0 && x <= x1;
    bool y_in = y >= y0 && y <= y1;
    if ((y_in && (x == x0 || x == x1)) || (x_in && (y == y0 || y == y1))) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("label_map substitutes mapped labels only") {
  DetectionSet d = make_set({{"person", 0.9f, {0, 0, 0.5f, 0.5f}}});
  DetectionSet mapped = label_map(d, {{"person", "human"}});
  REQUIRE(mapped.items.size() == 1);
  CHECK(mapped.items[0].label == "human");
  CHECK(mapped.items[0].score == 0.9f);

  CHECK(label_map(d, {}) == d);
  CHECK(label_map(d, {{"car", "vehicle"}}) == d);
}

TEST_CASE("count filters by label and inclusive min_score") {
  DetectionSet d = make_set({{"person", 0.9f, {0, 0, 1, 1}},
                             {"person", 0.8f, {0, 0, 1, 1}},
                             {"person", 0.4f, {0, 0, 1, 1}}});
  CHECK(count_detections(d, "person", 0.5).value == 2.0);
  CHECK(count_detections(DetectionSet{}, "person", 0.0).value == 0.0);
  CHECK(count_detections(d, "car", 0.0).value == 0.0);
  CHECK(count_detections(d, "person", 0.4).value == 3.0);  // inclusive
  CHECK_THROWS_AS(count_detections(d, "person", 1.5), Error);
  CHECK_THROWS_AS(count_detections(d, "person", -0.1), Error);
}

TEST_CASE("count matches brute force on random sets") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  for (int i = 0; i < 200; ++i) {
    DetectionSet d;
    size_t n = rng() % 10;
    for (size_t k = 0; k < n; ++k) {
      Detection det;
      det.label = (rng() % 2) ? "person" : "car";
      det.score = unit(rng);
      det.bbox = {0, 0, 1, 1};
      d.items.push_back(det);
    }
    double min_score = unit(rng);
    uint64_t expected = 0;
    for (const Detection& det : d.items) {
      if (det.label == "person" && det.score >= min_score) ++expected;
    }
    CHECK(count_detections(d, "person", min_score).value == static_cast<double>(expected));
  }
}

TEST_CASE("annotate: empty set leaves the image unchanged") {
  std::mt19937 rng(3);
  Tensor img = testutil::random_image(rng, 16);
  CHECK(annotate(img, DetectionSet{}, 255) == img);
}

TEST_CASE("annotate: full-image bbox paints the outermost frame") {
  Tensor img = Tensor::zeros(Dtype::U8, {4, 6, 1});
  DetectionSet d = make_set({{"person", 1.0f, {0, 0, 1, 1}}});
  Tensor out = annotate(img, d, 9);
  for (uint32_t y = 0; y < 4; ++y) {
    for (uint32_t x = 0; x < 6; ++x) {
      bool border = x == 0 || x == 5 || y == 0 || y == 3;
      CHECK(out.data[y * 6 + x] == (border ? 9 : 0));
    }
  }
}

TEST_CASE("annotate changes exactly the border pixels (oracle)") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  for (int i = 0; i < 100; ++i) {
    uint32_t h = 4 + rng() % 20, w = 4 + rng() % 20;
    Tensor img = Tensor::zeros(Dtype::U8, {h, w, 3});
    for (auto& b : img.data) b = static_cast<uint8_t>(rng() % 200);
    DetectionSet d;
    size_t boxes = 1 + rng() % 3;
    for (size_t k = 0; k < boxes; ++k) {
      float x0 = unit(rng), x1 = unit(rng), y0 = unit(rng), y1 = unit(rng);
      d.items.push_back({"person", 1.0f,
                         {std::min(x0, x1), std::min(y0, y1), std::max(x0, x1),
                          std::max(y0, y1)}});
    }
    Tensor out = annotate(img, d, 255);
    for (uint32_t y = 0; y < h; ++y) {
      for (uint32_t x = 0; x < w; ++x) {
        for (uint32_t c = 0; c < 3; ++c) {
          uint8_t expected = on_any_border(x, y, d, w, h)
                                 ? 255
                                 : img.data[(y * w + x) * 3 + c];
          REQUIRE(out.data[(y * w + x) * 3 + c] == expected);
        }
      }
    }
  }
}

TEST_CASE("to_text renderings") {
  CHECK(to_text(Scalar{2.0}).value == "2");
  CHECK(to_text(DetectionSet{}).value == "");
  DetectionSet d = make_set({{"person", 0.5f, {0, 0, 0.5f, 0.5f}}});
  CHECK(to_text(d).value == "person 0.5000 0.0000 0.0000 0.5000 0.5000");
  CHECK_THROWS_AS(to_text(Text{"x"}), Error);
}

TEST_CASE("chain: demo count step publishes scalar 2") {
  PostStepSpec count_step;
  count_step.op = PostOp::Count;
  count_step.params["label"] = std::string("person");
  count_step.publish = "/human_counter";
  PostChain chain = PostChain::compile({count_step});

  DetectionSet two = make_set(
      {{"person", 0.9f, {0, 0, 0.5f, 0.5f}}, {"person", 0.8f, {0.5f, 0.5f, 1, 1}}});
  std::vector<std::pair<std::string, Payload>> published;
  InferenceContext ctx;
  Payload result = chain.run(two, nullptr, ctx, [&](const std::string& chan, const Payload& p) {
    published.emplace_back(chan, p);
  });
  CHECK(result == Payload{Scalar{2.0}});
  REQUIRE(published.size() == 1);
  CHECK(published[0].first == "/human_counter");
  CHECK(published[0].second == Payload{Scalar{2.0}});
}

TEST_CASE("chain: empty chain returns input unchanged") {
  PostChain chain = PostChain::compile({});
  InferenceContext ctx;
  Payload in{Text{"pass"}};
  CHECK(chain.run(in, nullptr, ctx, nullptr) == in);
}

TEST_CASE("chain: label_map then count equals manual composition") {
  PostStepSpec map_step;
  map_step.op = PostOp::LabelMap;
  map_step.params["map"] = std::map<std::string, std::string>{{"person", "human"}};
  PostStepSpec count_step;
  count_step.op = PostOp::Count;
  count_step.params["label"] = std::string("human");
  PostChain chain = PostChain::compile({map_step, count_step});

  DetectionSet d = make_set(
      {{"person", 0.9f, {0, 0, 1, 1}}, {"car", 0.9f, {0, 0, 1, 1}}});
  InferenceContext ctx;
  Payload via_chain = chain.run(d, nullptr, ctx, nullptr);
  Payload manual = count_detections(label_map(d, {{"person", "human"}}), "human", 0.0);
  CHECK(via_chain == manual);
}

TEST_CASE("chain: published intermediates equal prefix evaluation") {
  PostStepSpec map_step;
  map_step.op = PostOp::LabelMap;
  map_step.params["map"] = std::map<std::string, std::string>{{"person", "human"}};
  map_step.publish = "mapped";
  PostStepSpec text_step;
  text_step.op = PostOp::ToText;
  text_step.publish = "rendered";
  PostChain chain = PostChain::compile({map_step, text_step});

  DetectionSet d = make_set({{"person", 0.25f, {0, 0, 1, 1}}});
  std::map<std::string, Payload> published;
  InferenceContext ctx;
  chain.run(d, nullptr, ctx,
            [&](const std::string& chan, const Payload& p) { published.emplace(chan, p); });
  CHECK(published.at("mapped") == Payload{label_map(d, {{"person", "human"}})});
  CHECK(published.at("rendered") == Payload{to_text(label_map(d, {{"person", "human"}}))});
}

TEST_CASE("chain: annotate uses the trigger image; format reads context") {
  PostStepSpec ann;
  ann.op = PostOp::Annotate;
  PostChain chain = PostChain::compile({ann});
  Tensor img = Tensor::zeros(Dtype::U8, {8, 8, 1});
  Payload trigger{img};
  DetectionSet d = make_set({{"person", 1.0f, {0, 0, 1, 1}}});
  InferenceContext ctx;
  Payload out = chain.run(d, &trigger, ctx, nullptr);
  CHECK(out == Payload{annotate(img, d, 255)});
  CHECK_THROWS_AS(chain.run(d, nullptr, ctx, nullptr), Error);

  PostStepSpec fmt;
  fmt.op = PostOp::Format;
  fmt.params["template"] = std::string("count={chan:c} raw={query}");
  PostChain fchain = PostChain::compile({fmt});
  InferenceContext fctx;
  fctx.latest["c"] = Scalar{5.0};
  CHECK(fchain.run(Scalar{2.0}, nullptr, fctx, nullptr) ==
        Payload{Text{"count=5 raw=2"}});
}

TEST_CASE("operators are pure: run twice, identical bytes") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  for (int i = 0; i < 50; ++i) {
    DetectionSet d;
    size_t n = rng() % 5;
    for (size_t k = 0; k < n; ++k) {
      d.items.push_back({"l" + std::to_string(rng() % 3), unit(rng), {0, 0, 1, 1}});
    }
    CHECK(encode_payload(label_map(d, {{"l0", "x"}})) ==
          encode_payload(label_map(d, {{"l0", "x"}})));
    CHECK(encode_payload(count_detections(d, "l1", 0.5)) ==
          encode_payload(count_detections(d, "l1", 0.5)));
    CHECK(encode_payload(to_text(d)) == encode_payload(to_text(d)));
  }
}
