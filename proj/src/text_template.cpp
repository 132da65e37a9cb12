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

#include "oricf/text_template.hpp"

#include <algorithm>

#include "oricf/errors.hpp"

namespace oricf {

TextTemplate TextTemplate::parse(const std::string& text) {
  TextTemplate tpl;
  tpl.source_ = text;
  std::string literal;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c != '{') {
      literal += c;
      ++i;
      continue;
    }
    size_t end = text.find('}', i);
    if (end == std::string::npos) {
      throw BackendError("malformed placeholder: unterminated '{' at offset " +
                         std::to_string(i));
    }
    std::string body = text.substr(i + 1, end - i - 1);
    if (!literal.empty()) {
      tpl.segments_.push_back({Segment::Kind::Literal, std::move(literal)});
      literal.clear();
    }
    if (body == "query") {
      tpl.segments_.push_back({Segment::Kind::Query, {}});
    } else if (body.rfind("chan:", 0) == 0 && body.size() > 5) {
      std::string name = body.substr(5);
      tpl.segments_.push_back({Segment::Kind::Channel, name});
      if (std::find(tpl.channels_.begin(), tpl.channels_.end(), name) ==
          tpl.channels_.end()) {
        tpl.channels_.push_back(std::move(name));
      }
    } else {
      throw BackendError("malformed placeholder '{" + body + "}'");
    }
    i = end + 1;
  }
  if (!literal.empty()) {
    tpl.segments_.push_back({Segment::Kind::Literal, std::move(literal)});
  }
  return tpl;
}

std::string TextTemplate::render(const std::string& query,
                                 const std::map<std::string, Payload>& latest) const {
  std::string out;
  for (const Segment& seg : segments_) {
    switch (seg.kind) {
      case Segment::Kind::Literal:
        out += seg.text;
        break;
      case Segment::Kind::Query:
        out += query;
        break;
      case Segment::Kind::Channel: {
        auto it = latest.find(seg.text);
        out += it == latest.end() ? "<unknown>" : render_payload_text(it->second);
        break;
      }
    }
  }
  return out;
}

}  // namespace oricf
