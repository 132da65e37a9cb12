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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oricf/backend.hpp"
#include "oricf/payload.hpp"
#include "oricf/pipeline_spec.hpp"
#include "oricf/text_template.hpp"

namespace oricf {

/// Replaces labels found in `mapping`; everything else passes through
/// untouched, order and scores preserved.
DetectionSet label_map(const DetectionSet& detections,
                       const std::map<std::string, std::string>& mapping);

/// Number of detections with `label` and score >= min_score (inclusive).
Scalar count_detections(const DetectionSet& detections, const std::string& label,
                        double min_score);

/// Draws the 1-pixel border of each detection box into a copy of `image`
/// (u8 [H,W,C]). Box corners are denormalized by (W, H), rounded half-up
/// and clamped; the border is written on every channel.
Tensor annotate(const Tensor& image, const DetectionSet& detections, uint8_t value);

/// DetectionSet or Scalar to its text rendering.
Text to_text(const Payload& payload);

/// A node's compiled post chain: decoded step parameters plus publish
/// bindings. Steps run in order; each step's output is published on its
/// binding (when present) before the next step runs.
class PostChain {
 public:
  using PublishFn = std::function<void(const std::string& channel, const Payload& payload)>;

  /// Compiles validated step specs. Throws Error on parameters that the
  /// spec validator would have rejected.
  static PostChain compile(const std::vector<PostStepSpec>& steps);

  /// `trigger` is the payload that triggered the node (annotate draws on
  /// it); `ctx` feeds format templates. Step errors propagate as
  /// exceptions and abort the chain for this message.
  Payload run(Payload input, const Payload* trigger, const InferenceContext& ctx,
              const PublishFn& publish) const;

  bool empty() const { return steps_.empty(); }

  /// Channels this chain publishes to, in step order.
  std::vector<std::string> publish_channels() const;

 private:
  struct Step {
    PostOp op = PostOp::ToText;
    std::map<std::string, std::string> mapping;  // label_map
    std::string label;                           // count
    double min_score = 0.0;                      // count
    uint8_t value = 255;                         // annotate
    std::optional<TextTemplate> tpl;             // format
    std::optional<std::string> publish;
  };
  std::vector<Step> steps_;
};

}  // namespace oricf
