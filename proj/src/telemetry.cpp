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

#include "oricf/telemetry.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "oricf/payload.hpp"

namespace oricf {

TraceStats trace_stats(const UtilizationTrace& trace) {
  if (trace.samples.empty()) throw Error("trace has no samples");
  const size_t n = trace.samples.size();
  double sum = 0.0;
  for (const UtilizationSample& s : trace.samples) sum += s.util_pct;
  const double mean = sum / static_cast<double>(n);

  std::vector<double> sorted;
  sorted.reserve(n);
  for (const UtilizationSample& s : trace.samples) sorted.push_back(s.util_pct);
  std::sort(sorted.begin(), sorted.end());
  const double median = (n % 2 == 1)
                            ? sorted[n / 2]
                            : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;

  double sq_sum = 0.0;
  for (const UtilizationSample& s : trace.samples) {
    const double d = s.util_pct - mean;
    sq_sum += d * d;
  }
  const double variance = sq_sum / static_cast<double>(n);
  return TraceStats{mean, median, variance};
}

static void check_power_params(const PowerParams& params) {
  if (!(params.p_full_w > params.p_idle_w) || !(params.p_idle_w > 0)) {
    throw Error("power params require p_full > p_idle > 0");
  }
}

double power_at(double u, const PowerParams& params) {
  check_power_params(params);
  if (!(u >= 0.0 && u <= 1.0)) {
    throw Error("utilization fraction out of [0,1]: " + render_scalar(u));
  }
  return params.p_idle_w + u * (params.p_full_w - params.p_idle_w);
}

double energy_reduction(double p_base_w, double p_loaded_w) {
  if (!(p_loaded_w > 0.0)) throw Error("energy_reduction requires a positive denominator");
  return 1.0 - p_base_w / p_loaded_w;
}

double load_reduction(double u_off_pct, double u_on_pct) {
  if (!(u_on_pct > 0.0)) throw Error("load_reduction requires a positive denominator");
  return 1.0 - u_off_pct / u_on_pct;
}

EnergyReport build_report(const UtilizationTrace& onboard, const UtilizationTrace& offload,
                          const PowerParams& params, bool use_mean) {
  check_power_params(params);
  EnergyReport report;
  report.onboard = trace_stats(onboard);
  report.offload = trace_stats(offload);
  report.onboard_label = onboard.source_label;
  report.offload_label = offload.source_label;
  report.params = params;
  report.use_mean = use_mean;
  const double u_on = use_mean ? report.onboard.mean_pct : report.onboard.median_pct;
  const double u_off = use_mean ? report.offload.mean_pct : report.offload.median_pct;
  report.p_loaded_w = power_at(u_on / 100.0, params);
  report.p_base_w = power_at(u_off / 100.0, params);
  report.energy_reduction = energy_reduction(report.p_base_w, report.p_loaded_w);
  report.load_reduction = load_reduction(u_off, u_on);
  return report;
}

namespace {

nlohmann::ordered_json stats_json(const TraceStats& stats, const std::string& label) {
  nlohmann::ordered_json j;
  j["label"] = label;
  j["mean_pct"] = stats.mean_pct;
  j["median_pct"] = stats.median_pct;
  j["variance"] = stats.variance;
  j["stddev_pct"] = stats.stddev_pct();
  return j;
}

TraceStats stats_from_json(const nlohmann::json& j, std::string& label) {
  TraceStats stats;
  label = j.at("label").get<std::string>();
  stats.mean_pct = j.at("mean_pct").get<double>();
  stats.median_pct = j.at("median_pct").get<double>();
  stats.variance = j.at("variance").get<double>();
  return stats;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::string report_to_json(const EnergyReport& report) {
  nlohmann::ordered_json j;
  j["onboard"] = stats_json(report.onboard, report.onboard_label);
  j["offload"] = stats_json(report.offload, report.offload_label);
  j["p_idle_w"] = report.params.p_idle_w;
  j["p_full_w"] = report.params.p_full_w;
  j["basis"] = report.use_mean ? "mean" : "median";
  j["p_loaded_w"] = report.p_loaded_w;
  j["p_base_w"] = report.p_base_w;
  j["energy_reduction"] = report.energy_reduction;
  j["load_reduction"] = report.load_reduction;
  return j.dump();
}

EnergyReport report_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error("malformed report JSON");
  try {
    EnergyReport report;
    report.onboard = stats_from_json(j.at("onboard"), report.onboard_label);
    report.offload = stats_from_json(j.at("offload"), report.offload_label);
    report.params.p_idle_w = j.at("p_idle_w").get<double>();
    report.params.p_full_w = j.at("p_full_w").get<double>();
    report.use_mean = j.at("basis").get<std::string>() == "mean";
    report.p_loaded_w = j.at("p_loaded_w").get<double>();
    report.p_base_w = j.at("p_base_w").get<double>();
    report.energy_reduction = j.at("energy_reduction").get<double>();
    report.load_reduction = j.at("load_reduction").get<double>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report JSON: ") + e.what());
  }
}

std::string report_table(const EnergyReport& report) {
  std::ostringstream os;
  auto row = [&os](const std::string& name, double a, double b) {
    os << name;
    for (size_t i = name.size(); i < 24; ++i) os << ' ';
    std::string left = fixed(a, 2);
    std::string right = fixed(b, 2);
    for (size_t i = left.size(); i < 12; ++i) os << ' ';
    os << left;
    for (size_t i = right.size(); i < 12; ++i) os << ' ';
    os << right << "\n";
  };
  std::string on = report.onboard_label.empty() ? "onboard" : report.onboard_label;
  std::string off = report.offload_label.empty() ? "offload" : report.offload_label;
  os << "Value";
  for (size_t i = 5; i < 24; ++i) os << ' ';
  for (size_t i = on.size(); i < 12; ++i) os << ' ';
  os << on;
  for (size_t i = off.size(); i < 12; ++i) os << ' ';
  os << off << "\n";
  row("Average (%)", report.onboard.mean_pct, report.offload.mean_pct);
  row("Median (%)", report.onboard.median_pct, report.offload.median_pct);
  row("Variance", report.onboard.variance, report.offload.variance);
  row("Standard Deviation (%)", report.onboard.stddev_pct(), report.offload.stddev_pct());
  os << "\n";
  const char* basis = report.use_mean ? "mean" : "median";
  os << "P_loaded (" << on << " " << basis << "): " << fixed(report.p_loaded_w, 1) << " W\n";
  os << "P_base (" << off << " " << basis << "): " << fixed(report.p_base_w, 1) << " W\n";
  os << "Energy reduction: " << fixed(report.energy_reduction * 100.0, 1) << "%\n";
  os << "Load reduction: " << fixed(report.load_reduction * 100.0, 2) << "%\n";
  return os.str();
}

HostSampler::HostSampler() {
  std::ifstream probe("/proc/stat");
  std::string line;
  if (!probe || !std::getline(probe, line) || line.rfind("cpu ", 0) != 0) {
    throw Error("host CPU sampler unavailable: cannot read /proc/stat");
  }
}

std::optional<UtilizationSample> HostSampler::next(double elapsed_s) {
  std::ifstream stream("/proc/stat");
  std::string label;
  uint64_t user = 0, nice = 0, system = 0, idle = 0, iowait = 0, irq = 0, softirq = 0,
           steal = 0;
  if (!(stream >> label >> user >> nice >> system >> idle >> iowait >> irq >> softirq >>
        steal) ||
      label != "cpu") {
    throw Error("host CPU sampler unavailable: cannot parse /proc/stat");
  }
  const uint64_t idle_all = idle + iowait;
  const uint64_t total = user + nice + system + idle + iowait + irq + softirq + steal;
  if (!primed_) {
    primed_ = true;
    last_idle_ = idle_all;
    last_total_ = total;
    return std::nullopt;
  }
  const uint64_t d_total = total - last_total_;
  const uint64_t d_idle = idle_all - last_idle_;
  last_idle_ = idle_all;
  last_total_ = total;
  double pct = 0.0;
  if (d_total > 0) {
    pct = 100.0 * (1.0 - static_cast<double>(d_idle) / static_cast<double>(d_total));
  }
  pct = std::clamp(pct, 0.0, 100.0);
  return UtilizationSample{elapsed_s, pct};
}

std::optional<UtilizationSample> ReplaySampler::next(double) {
  if (index_ >= trace_.samples.size()) return std::nullopt;
  return trace_.samples[index_++];
}

UtilizationTrace sample_host(uint64_t interval_ms, double duration_s, Sampler& sampler) {
  UtilizationTrace trace;
  trace.source_label = sampler.label();
  if (!sampler.realtime()) {
    while (auto sample = sampler.next(0.0)) trace.samples.push_back(*sample);
    return trace;
  }
  if (interval_ms == 0) throw Error("sampling interval must be positive");
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto interval = std::chrono::milliseconds(interval_ms);
  // Prime delta-based samplers; the first reading has no window yet.
  sampler.next(0.0);
  auto tick = start;
  while (true) {
    tick += interval;
    std::this_thread::sleep_until(tick);
    const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
    if (elapsed > duration_s + 1e-9) break;
    if (auto sample = sampler.next(elapsed)) trace.samples.push_back(*sample);
  }
  return trace;
}

UtilizationTrace parse_trace_csv(const std::string& text, const std::string& label) {
  UtilizationTrace trace;
  trace.source_label = label;
  std::istringstream stream(text);
  std::string line;
  size_t line_no = 0;
  bool header_seen = false;
  double last_t = -1.0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "t_s,util_pct") {
        throw Error("trace CSV line " + std::to_string(line_no) +
                    ": expected header 't_s,util_pct'");
      }
      header_seen = true;
      continue;
    }
    size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error("trace CSV line " + std::to_string(line_no) + ": expected 't,util'");
    }
    auto parse_double = [&](const std::string& raw) {
      double v = 0;
      auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
      if (ec != std::errc() || ptr != raw.data() + raw.size()) {
        throw Error("trace CSV line " + std::to_string(line_no) + ": bad number '" + raw + "'");
      }
      return v;
    };
    UtilizationSample sample;
    sample.t_s = parse_double(line.substr(0, comma));
    sample.util_pct = parse_double(line.substr(comma + 1));
    if (!(sample.util_pct >= 0.0 && sample.util_pct <= 100.0)) {
      throw Error("trace CSV line " + std::to_string(line_no) +
                  ": utilization out of [0,100]");
    }
    if (sample.t_s < last_t) {
      throw Error("trace CSV line " + std::to_string(line_no) + ": timestamps must not decrease");
    }
    last_t = sample.t_s;
    trace.samples.push_back(sample);
  }
  if (!header_seen) throw Error("trace CSV line 1: expected header 't_s,util_pct'");
  return trace;
}

UtilizationTrace load_trace_csv(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) throw Error("cannot open trace CSV '" + path + "'");
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse_trace_csv(buffer.str(), path);
}

std::string trace_to_csv(const UtilizationTrace& trace) {
  std::string out = "t_s,util_pct\n";
  for (const UtilizationSample& s : trace.samples) {
    out += render_scalar(s.t_s);
    out += ',';
    out += render_scalar(s.util_pct);
    out += '\n';
  }
  return out;
}

}  // namespace oricf
