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

#include <string>
#include <vector>

namespace oricf {

/// One validation finding, anchored to a path into the YAML document
/// (e.g. "nodes[0].inputs"). `code` is a stable machine-readable id.
struct Diagnostic {
  std::string path;
  std::string code;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

using DiagnosticList = std::vector<Diagnostic>;

std::string format_diagnostics(const DiagnosticList& diags);

namespace diag {
inline constexpr const char* kSyntax = "syntax";
inline constexpr const char* kUnknownField = "unknown-field";
inline constexpr const char* kMissingField = "missing-field";
inline constexpr const char* kBadValue = "bad-value";
inline constexpr const char* kUnsupportedVersion = "unsupported-version";
inline constexpr const char* kDuplicateName = "duplicate-name";
inline constexpr const char* kUndeclaredChannel = "undeclared-channel";
inline constexpr const char* kKindMismatch = "kind-mismatch";
inline constexpr const char* kMultipleProducers = "multiple-producers";
inline constexpr const char* kCycle = "cycle";
inline constexpr const char* kOrphanChannel = "orphan-channel";
inline constexpr const char* kUnknownBackend = "unknown-backend";
inline constexpr const char* kUnknownAdapter = "unknown-adapter";
inline constexpr const char* kBadPlacement = "bad-placement";
inline constexpr const char* kBadParams = "bad-params";
inline constexpr const char* kContextNotAllowed = "context-not-allowed";
inline constexpr const char* kMixedSequencing = "mixed-sequencing";
}  // namespace diag

}  // namespace oricf
