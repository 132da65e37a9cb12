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

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oricf/errors.hpp"

namespace oricf {

struct UtilizationSample {
  double t_s = 0.0;
  double util_pct = 0.0;  // whole-system CPU utilization in [0,100]
  bool operator==(const UtilizationSample&) const = default;
};

struct UtilizationTrace {
  std::vector<UtilizationSample> samples;  // t_s nondecreasing
  std::string source_label;
  bool operator==(const UtilizationTrace&) const = default;
};

/// Descriptive statistics over a trace's utilization values. Variance is
/// the population variance (divide by n); the standard deviation is
/// always derived as sqrt(variance), never stored, so the pair can never
/// drift apart through rounding.
struct TraceStats {
  double mean_pct = 0.0;
  double median_pct = 0.0;
  double variance = 0.0;

  double stddev_pct() const { return std::sqrt(variance); }
  bool operator==(const TraceStats&) const = default;
};

/// Throws Error on an empty trace.
TraceStats trace_stats(const UtilizationTrace& trace);

struct PowerParams {
  double p_idle_w = 0.0;
  double p_full_w = 0.0;
  bool operator==(const PowerParams&) const = default;
};

/// Linear utilization-to-power model: p_idle + u * (p_full - p_idle).
/// `u` is a fraction in [0,1]. Requires p_full > p_idle > 0.
double power_at(double u, const PowerParams& params);

/// Relative power reduction 1 - p_base / p_loaded. Requires p_loaded > 0.
double energy_reduction(double p_base_w, double p_loaded_w);

/// Relative utilization reduction 1 - u_off / u_on (percent inputs).
/// Requires u_on_pct > 0.
double load_reduction(double u_off_pct, double u_on_pct);

struct EnergyReport {
  TraceStats onboard;
  TraceStats offload;
  std::string onboard_label;
  std::string offload_label;
  PowerParams params;
  bool use_mean = false;  // medians drive the model unless set
  double p_loaded_w = 0.0;
  double p_base_w = 0.0;
  double energy_reduction = 0.0;
  double load_reduction = 0.0;
  bool operator==(const EnergyReport&) const = default;
};

/// Applies the power model to both traces. Medians drive the estimate
/// (use_mean switches to means for comparison).
EnergyReport build_report(const UtilizationTrace& onboard, const UtilizationTrace& offload,
                          const PowerParams& params, bool use_mean = false);

/// Full-precision JSON; round-trips through report_from_json.
std::string report_to_json(const EnergyReport& report);
EnergyReport report_from_json(const std::string& json_text);

/// Human-readable table: one statistics row group per trace at 2
/// decimals, then the power estimates and reduction lines.
std::string report_table(const EnergyReport& report);

/// One measurement feed. `realtime()` samplers are paced by
/// sample_host's interval; replay samplers run to exhaustion unpaced.
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual std::optional<UtilizationSample> next(double elapsed_s) = 0;
  virtual bool realtime() const { return true; }
  virtual std::string label() const { return "sampler"; }
};

/// Whole-system CPU utilization from /proc/stat deltas (vmstat-style).
/// Construction throws Error when the platform counters are unavailable.
class HostSampler final : public Sampler {
 public:
  HostSampler();
  std::optional<UtilizationSample> next(double elapsed_s) override;
  std::string label() const override { return "host"; }

 private:
  uint64_t last_idle_ = 0;
  uint64_t last_total_ = 0;
  bool primed_ = false;
};

/// Replays a recorded trace verbatim (timestamps included).
class ReplaySampler final : public Sampler {
 public:
  explicit ReplaySampler(UtilizationTrace trace) : trace_(std::move(trace)) {}
  std::optional<UtilizationSample> next(double elapsed_s) override;
  bool realtime() const override { return false; }
  std::string label() const override { return trace_.source_label; }

 private:
  UtilizationTrace trace_;
  size_t index_ = 0;
};

/// Collects samples every interval_ms until duration_s elapses (realtime
/// samplers) or the sampler is exhausted (replay samplers).
UtilizationTrace sample_host(uint64_t interval_ms, double duration_s, Sampler& sampler);

/// Trace CSV: header `t_s,util_pct`, one sample per line, dot decimals.
/// Parse errors name the offending line number.
UtilizationTrace parse_trace_csv(const std::string& text, const std::string& label);
UtilizationTrace load_trace_csv(const std::string& path);
std::string trace_to_csv(const UtilizationTrace& trace);

}  // namespace oricf
