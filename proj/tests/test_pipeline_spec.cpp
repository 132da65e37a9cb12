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

#include <algorithm>
#include <map>

#include "oricf/pipeline_spec.hpp"
#include "test_util.hpp"

using namespace oricf;
using oricf::testutil::SpecGenerator;

namespace {

size_t count_code(const DiagnosticList& diags, const char* code) {
  return static_cast<size_t>(std::count_if(
      diags.begin(), diags.end(), [code](const Diagnostic& d) { return d.code == code; }));
}

const char* kMinimalSpec = R"(
version: 1
channels:
  - name: readings
    kind: scalar
sources:
  - channel: readings
    adapter: file
    params: {path: in.jsonl}
sinks:
  - channel: readings
    adapter: file
    params: {path: out.jsonl}
)";

const char* kCycleSpec = R"(
version: 1
channels:
  - name: x
    kind: text
  - name: y
    kind: text
nodes:
  - name: a
    model: m
    backend: identity
    inputs: [x]
    publish_raw: y
  - name: b
    model: m
    backend: identity
    inputs: [y]
    post:
      - op: format
        params: {template: "{query}"}
        publish: x
)";

}  // namespace

TEST_CASE("minimal valid spec: one channel, one source, one sink, zero nodes") {
  ParseResult result = parse_spec(kMinimalSpec);
  REQUIRE(result.ok());
  CHECK(result.spec->nodes.empty());
  CHECK(result.spec->channels.size() == 1);
  CHECK(result.spec->sources.size() == 1);
  CHECK(result.spec->sinks.size() == 1);
}

TEST_CASE("shipped demo spec: 2 nodes, 5 channels, expected wiring") {
  ParseResult result = parse_spec(testutil::demo_spec_text());
  REQUIRE_MESSAGE(result.ok(), format_diagnostics(result.diagnostics));
  const PipelineSpec& spec = *result.spec;
  CHECK(spec.nodes.size() == 2);
  CHECK(spec.channels.size() == 5);
  CHECK(spec.find_channel("camera/image_raw") != nullptr);
  CHECK(spec.find_channel("/human_counter") != nullptr);
  CHECK(spec.nodes[0].name == "person_detector");
  CHECK(spec.nodes[1].name == "answer_llm");
  CHECK(spec.nodes[1].context_channels() == std::vector<std::string>{"/human_counter"});
  CHECK(spec.sequenced());
}

TEST_CASE("mutual dependency yields exactly one cycle diagnostic naming both nodes") {
  ParseResult result = parse_spec(kCycleSpec);
  REQUIRE_FALSE(result.ok());
  REQUIRE(result.diagnostics.size() == 1);
  const Diagnostic& d = result.diagnostics[0];
  CHECK(d.code == diag::kCycle);
  CHECK(d.message.find("a") != std::string::npos);
  CHECK(d.message.find("b") != std::string::npos);
}

TEST_CASE("validate_graph orders the demo spec detector before llm") {
  ParseResult result = parse_spec(testutil::demo_spec_text());
  REQUIRE(result.ok());
  GraphResult graph = validate_graph(*result.spec);
  REQUIRE(graph.ok());
  CHECK(graph.order == std::vector<std::string>{"person_detector", "answer_llm"});
}

TEST_CASE("validate_graph on empty node list") {
  ParseResult result = parse_spec(kMinimalSpec);
  REQUIRE(result.ok());
  GraphResult graph = validate_graph(*result.spec);
  REQUIRE(graph.ok());
  CHECK(graph.order.empty());
}

TEST_CASE("independent nodes order by name ascending") {
  const char* text = R"(
version: 1
channels:
  - name: t1
    kind: text
  - name: t2
    kind: text
  - name: o1
    kind: text
  - name: o2
    kind: text
sources:
  - channel: t1
    adapter: stdin-text
  - channel: t2
    adapter: file
    params: {path: x.jsonl}
nodes:
  - name: b
    model: m
    backend: identity
    inputs: [t1]
    publish_raw: o1
  - name: a
    model: m
    backend: identity
    inputs: [t2]
    publish_raw: o2
)";
  ParseResult result = parse_spec(text);
  REQUIRE_MESSAGE(result.ok(), format_diagnostics(result.diagnostics));
  GraphResult graph = validate_graph(*result.spec);
  REQUIRE(graph.ok());
  CHECK(graph.order == std::vector<std::string>{"a", "b"});
}

TEST_CASE("orphan channels are a validate_graph error") {
  const char* text = R"(
version: 1
channels:
  - name: t
    kind: text
  - name: o
    kind: text
nodes:
  - name: n
    model: m
    backend: identity
    inputs: [t]
    publish_raw: o
)";
  ParseResult result = parse_spec(text);
  REQUIRE(result.ok());  // orphans are reported by validate_graph, not parse
  GraphResult graph = validate_graph(*result.spec);
  REQUIRE_FALSE(graph.ok());
  CHECK(count_code(graph.diagnostics, diag::kOrphanChannel) == 1);
  CHECK(graph.diagnostics[0].message.find("'t'") != std::string::npos);
}

TEST_CASE("serialize/parse round-trip on the minimal and demo specs") {
  for (const std::string& text : {std::string(kMinimalSpec), testutil::demo_spec_text()}) {
    ParseResult first = parse_spec(text);
    REQUIRE(first.ok());
    std::string canonical = serialize_spec(*first.spec);
    ParseResult second = parse_spec(canonical);
    REQUIRE_MESSAGE(second.ok(), format_diagnostics(second.diagnostics));
    CHECK(*second.spec == *first.spec);
  }
  std::string canonical = serialize_spec(*parse_spec(testutil::demo_spec_text()).spec);
  CHECK(canonical.find("camera/image_raw") != std::string::npos);
  CHECK(canonical.find("/human_counter") != std::string::npos);
}

TEST_CASE("edge placement serializes as edge://host:port and round-trips") {
  ParseResult result = parse_spec(testutil::demo_spec_text());
  REQUIRE(result.ok());
  PipelineSpec spec = *result.spec;
  spec.placement["person_detector"] = PlacementTarget::edge("h", 7070);
  std::string text = serialize_spec(spec);
  CHECK(text.find("edge://h:7070") != std::string::npos);
  ParseResult back = parse_spec(text);
  REQUIRE(back.ok());
  CHECK(*back.spec == spec);
}

TEST_CASE("placement grammar") {
  CHECK(PlacementTarget::parse("onboard") == PlacementTarget::onboard());
  auto edge = PlacementTarget::parse("edge://worker-1:7070");
  REQUIRE(edge.has_value());
  CHECK(edge->host == "worker-1");
  CHECK(edge->port == 7070);
  CHECK(edge->to_string() == "edge://worker-1:7070");
  CHECK_FALSE(PlacementTarget::parse("edge://:7070").has_value());
  CHECK_FALSE(PlacementTarget::parse("edge://h:0").has_value());
  CHECK_FALSE(PlacementTarget::parse("edge://h:99999").has_value());
  CHECK_FALSE(PlacementTarget::parse("edge://h").has_value());
  CHECK_FALSE(PlacementTarget::parse("cloud://h:1").has_value());
}

TEST_CASE("diagnostics carry paths and all violations are collected") {
  const char* text = R"(
version: 2
channels:
  - name: "bad name"
    kind: text
  - name: dup
    kind: text
  - name: dup
    kind: nope
nodes:
  - name: n
    model: m
    backend: no-such-backend
    inputs: []
    extra_key: 1
)";
  ParseResult result = parse_spec(text);
  REQUIRE_FALSE(result.ok());
  CHECK(count_code(result.diagnostics, diag::kUnsupportedVersion) == 1);
  CHECK(count_code(result.diagnostics, diag::kBadValue) >= 2);
  CHECK(count_code(result.diagnostics, diag::kDuplicateName) == 1);
  CHECK(count_code(result.diagnostics, diag::kUnknownBackend) == 1);
  CHECK(count_code(result.diagnostics, diag::kUnknownField) == 1);
  CHECK(result.diagnostics.size() >= 6);

  bool found_path = false;
  for (const Diagnostic& d : result.diagnostics) {
    if (d.path == "channels[2].name" && d.code == diag::kDuplicateName) found_path = true;
  }
  CHECK(found_path);
}

TEST_CASE("strict schema rejects unknown top-level keys") {
  ParseResult result = parse_spec("version: 1\nbogus: true\n");
  REQUIRE_FALSE(result.ok());
  CHECK(count_code(result.diagnostics, diag::kUnknownField) == 1);
  CHECK(result.diagnostics[0].path == "bogus");
}

TEST_CASE("kind mismatches are rejected with paths") {
  const char* text = R"(
version: 1
channels:
  - name: img
    kind: image
  - name: txt
    kind: text
  - name: cnt
    kind: text
sources:
  - channel: img
    adapter: synthetic-frames
    params: {width: "16", height: "16", blocks: "[[[0,0]]]"}
nodes:
  - name: det
    model: m
    backend: stub-detector
    inputs: [img]
    post:
      - op: count
        params: {label: person}
        publish: cnt
  - name: echo
    model: m
    backend: identity
    inputs: [img]
)";
  ParseResult result = parse_spec(text);
  REQUIRE_FALSE(result.ok());
  // count publishes scalar onto a text channel; identity cannot eat images.
  CHECK(count_code(result.diagnostics, diag::kKindMismatch) == 2);
}

TEST_CASE("single-producer rule") {
  const char* text = R"(
version: 1
channels:
  - name: t
    kind: text
sources:
  - channel: t
    adapter: stdin-text
  - channel: t
    adapter: file
    params: {path: x.jsonl}
)";
  ParseResult result = parse_spec(text);
  REQUIRE_FALSE(result.ok());
  CHECK(count_code(result.diagnostics, diag::kMultipleProducers) == 1);
}

TEST_CASE("mixed sequencing is rejected") {
  const char* text = R"(
version: 1
channels:
  - name: a
    kind: text
  - name: b
    kind: text
sources:
  - channel: a
    adapter: stdin-text
    sequence: 0
  - channel: b
    adapter: file
    params: {path: x.jsonl}
)";
  ParseResult result = parse_spec(text);
  REQUIRE_FALSE(result.ok());
  CHECK(count_code(result.diagnostics, diag::kMixedSequencing) == 1);
}

TEST_CASE("context references must be declared and context-capable") {
  const char* text = R"(
version: 1
channels:
  - name: q
    kind: text
sources:
  - channel: q
    adapter: stdin-text
nodes:
  - name: llm
    model: m
    backend: template-llm
    config: {template: "count={chan:ghost}"}
    inputs: [q]
)";
  ParseResult result = parse_spec(text);
  REQUIRE_FALSE(result.ok());
  CHECK(count_code(result.diagnostics, diag::kUndeclaredChannel) == 1);

  const char* text2 = R"(
version: 1
channels:
  - name: q
    kind: text
  - name: c
    kind: scalar
sources:
  - channel: q
    adapter: stdin-text
  - channel: c
    adapter: file
    params: {path: x.jsonl}
nodes:
  - name: echo
    model: m
    backend: identity
    config: {note: "count={chan:c}"}
    inputs: [q]
)";
  ParseResult result2 = parse_spec(text2);
  REQUIRE_FALSE(result2.ok());
  CHECK(count_code(result2.diagnostics, diag::kContextNotAllowed) == 1);
}

TEST_CASE("syntax errors and empty documents are reported, not thrown") {
  CHECK_FALSE(parse_spec(": : :").ok());
  ParseResult empty = parse_spec("");
  REQUIRE_FALSE(empty.ok());
  CHECK(empty.diagnostics[0].code == diag::kMissingField);
}

TEST_CASE("determinism: identical input text yields identical diagnostics") {
  const char* text = R"(
version: 3
channels:
  - name: dup
    kind: text
  - name: dup
    kind: text
nodes:
  - name: n
    model: m
    backend: ghost
    inputs: [missing]
)";
  ParseResult a = parse_spec(text);
  ParseResult b = parse_spec(text);
  CHECK(a.diagnostics == b.diagnostics);
  CHECK(format_diagnostics(a.diagnostics) == format_diagnostics(b.diagnostics));
}

TEST_CASE("property: 500 randomized valid specs round-trip through YAML") {
  SpecGenerator generator(20260810);
  for (int i = 0; i < 500; ++i) {
    PipelineSpec spec = generator.random_spec();
    std::string text = serialize_spec(spec);
    ParseResult result = parse_spec(text);
    REQUIRE_MESSAGE(result.ok(), "case " << i << ":\n"
                                         << text << format_diagnostics(result.diagnostics));
    REQUIRE_MESSAGE(*result.spec == spec, "case " << i << " reparse differs:\n" << text);
    GraphResult graph = validate_graph(*result.spec);
    REQUIRE_MESSAGE(graph.ok(), "case " << i << ":\n" << format_diagnostics(graph.diagnostics));

    // The order must be a permutation of node names respecting every
    // producer -> consumer edge (brute-force position check).
    REQUIRE(graph.order.size() == spec.nodes.size());
    auto position = [&](const std::string& name) {
      return std::find(graph.order.begin(), graph.order.end(), name) - graph.order.begin();
    };
    std::map<std::string, std::string> producer_of;
    for (const NodeSpec& node : spec.nodes) {
      CHECK(position(node.name) < static_cast<long>(graph.order.size()));
      if (node.publish_raw) producer_of[*node.publish_raw] = node.name;
      for (const PostStepSpec& step : node.post) {
        if (step.publish) producer_of[*step.publish] = node.name;
      }
    }
    for (const NodeSpec& node : spec.nodes) {
      std::vector<std::string> consumed = node.inputs;
      for (const std::string& c : node.context_channels()) consumed.push_back(c);
      for (const std::string& channel : consumed) {
        auto it = producer_of.find(channel);
        if (it != producer_of.end()) {
          CHECK(position(it->second) < position(node.name));
        }
      }
    }
  }
}
