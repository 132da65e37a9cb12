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
#include <string>
#include <vector>

#include "oricf/payload.hpp"

namespace oricf {

/// Substitution template with placeholders `{query}` (the triggering
/// input, rendered as text) and `{chan:NAME}` (latest context value of
/// channel NAME, rendered as text; `<unknown>` when absent). Everything
/// else is literal. A `{` that does not open a valid placeholder is a
/// parse error.
class TextTemplate {
 public:
  /// Throws BackendError on a malformed placeholder.
  static TextTemplate parse(const std::string& text);

  std::string render(const std::string& query,
                     const std::map<std::string, Payload>& latest) const;

  /// Channels referenced by `{chan:...}` placeholders, in order of first
  /// appearance.
  const std::vector<std::string>& channels() const { return channels_; }

  const std::string& source() const { return source_; }

 private:
  struct Segment {
    enum class Kind { Literal, Query, Channel } kind = Kind::Literal;
    std::string text;  // literal text or channel name
  };

  std::string source_;
  std::vector<Segment> segments_;
  std::vector<std::string> channels_;
};

}  // namespace oricf
