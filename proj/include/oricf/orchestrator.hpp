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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oricf/adapters.hpp"
#include "oricf/backend.hpp"
#include "oricf/bus.hpp"
#include "oricf/pipeline_spec.hpp"
#include "oricf/postproc.hpp"
#include "oricf/remote.hpp"

namespace oricf {

struct NodeReport {
  std::string name;
  uint64_t messages_in = 0;
  uint64_t messages_out = 0;
  uint64_t errors = 0;
  bool failed = false;
  std::string first_error;
};

struct RunReport {
  std::vector<NodeReport> nodes;  // topological order
  double wall_time_s = 0.0;
  std::optional<std::string> telemetry_path;

  bool any_failed() const;
  /// Timing is volatile; it is excluded by default so repeated sequenced
  /// runs print byte-identical output.
  std::string to_json(bool include_timing = false) const;
};

struct RunOptions {
  /// Free-running stop deadline; unset means run until sources exhaust.
  std::optional<double> duration_s;
  /// Record every payload published on every channel (wire encoding).
  bool capture_channels = false;
  /// Write a utilization trace CSV sampled while the pipeline runs.
  std::optional<std::string> telemetry_csv;
  uint64_t telemetry_interval_ms = 100;
};

struct RunResult {
  RunReport report;
  /// channel -> wire-encoded payloads in publish order (capture_channels).
  std::map<std::string, std::vector<std::vector<uint8_t>>> captures;
};

/// A validated spec instantiated into adapters, loaded models (local or
/// remote per placement), and compiled post chains. Build failures
/// (unknown backend, unreachable worker after retries) throw Error naming
/// the node. run() may be called once per Pipeline.
class Pipeline {
 public:
  static Pipeline build(const PipelineSpec& spec, const BackendRegistry& registry,
                        const AdapterRegistry& adapters);
  ~Pipeline();
  Pipeline(Pipeline&&) noexcept;
  Pipeline& operator=(Pipeline&&) = delete;
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  /// Sequenced specs run on the calling thread, one source message fully
  /// propagated before the next; free-running specs spawn one task per
  /// adapter and node.
  RunResult run(const RunOptions& options = {});

 private:
  Pipeline();
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Deterministic DOT rendering: channels as ellipses, nodes as boxes,
/// solid edges for data flow, dashed edges for context reads.
std::string graph_dot(const PipelineSpec& spec);

}  // namespace oricf
