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

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "oricf/adapters.hpp"
#include "oricf/backend.hpp"
#include "oricf/log.hpp"
#include "oricf/net.hpp"
#include "oricf/orchestrator.hpp"
#include "oricf/pipeline_spec.hpp"
#include "oricf/telemetry.hpp"
#include "oricf/worker.hpp"

namespace {

// Exit codes are part of the CLI contract.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitUsage = 3;

volatile std::sig_atomic_t g_interrupted = 0;

void handle_interrupt(int) { g_interrupted = 1; }

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) return std::nullopt;
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

// Loads and validates a spec, applying --placement overrides (last writer
// wins) before revalidation. Prints diagnostics to stderr.
std::optional<oricf::PipelineSpec> load_spec(const std::string& path,
                                             const std::vector<std::string>& placements,
                                             int& exit_code) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "cannot read '" << path << "'\n";
    exit_code = kExitUsage;
    return std::nullopt;
  }
  oricf::ParseResult parsed = oricf::parse_spec(*text);
  if (!parsed.ok()) {
    std::cerr << oricf::format_diagnostics(parsed.diagnostics);
    exit_code = kExitValidation;
    return std::nullopt;
  }
  oricf::PipelineSpec spec = std::move(*parsed.spec);
  for (const std::string& override_text : placements) {
    size_t eq = override_text.find('=');
    if (eq == std::string::npos) {
      std::cerr << "--placement expects NODE=TARGET, got '" << override_text << "'\n";
      exit_code = kExitUsage;
      return std::nullopt;
    }
    std::string node = override_text.substr(0, eq);
    std::string target_text = override_text.substr(eq + 1);
    auto target = oricf::PlacementTarget::parse(target_text);
    if (!target) {
      std::cerr << "invalid placement target '" << target_text
                << "' (use 'onboard' or 'edge://host:port')\n";
      exit_code = kExitUsage;
      return std::nullopt;
    }
    if (!spec.find_node(node)) {
      std::cerr << "placement." << node << ": [bad-placement] placement names unknown node '"
                << node << "'\n";
      exit_code = kExitValidation;
      return std::nullopt;
    }
    spec.placement[node] = *target;
  }
  return spec;
}

int cmd_validate(const std::string& path) {
  int exit_code = kExitOk;
  auto spec = load_spec(path, {}, exit_code);
  if (!spec) return exit_code;
  oricf::GraphResult graph = oricf::validate_graph(*spec);
  if (!graph.ok()) {
    std::cerr << oricf::format_diagnostics(graph.diagnostics);
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_graph(const std::string& path) {
  int exit_code = kExitOk;
  auto spec = load_spec(path, {}, exit_code);
  if (!spec) return exit_code;
  oricf::GraphResult graph = oricf::validate_graph(*spec);
  if (!graph.ok()) {
    std::cerr << oricf::format_diagnostics(graph.diagnostics);
    return kExitValidation;
  }
  std::cout << oricf::graph_dot(*spec);
  return kExitOk;
}

int cmd_run(const std::string& path, const std::vector<std::string>& placements,
            std::optional<double> duration, std::optional<std::string> telemetry,
            bool timing) {
  int exit_code = kExitOk;
  auto spec = load_spec(path, placements, exit_code);
  if (!spec) return exit_code;
  try {
    oricf::Pipeline pipeline =
        oricf::Pipeline::build(*spec, oricf::builtin_registry(), oricf::builtin_adapters());
    oricf::RunOptions options;
    options.duration_s = duration;
    options.telemetry_csv = telemetry;
    oricf::RunResult result = pipeline.run(options);
    std::cout << result.report.to_json(timing) << "\n";
    return result.report.any_failed() ? kExitRuntime : kExitOk;
  } catch (const oricf::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_worker(const std::string& listen) {
  std::string host;
  uint16_t port = 0;
  try {
    std::tie(host, port) = oricf::parse_host_port(listen);
  } catch (const oricf::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  try {
    oricf::WorkerServer server(host, port, oricf::builtin_registry());
    oricf::log_info("worker: listening on " + host + ":" + std::to_string(server.port()));
    std::signal(SIGINT, handle_interrupt);
    std::signal(SIGTERM, handle_interrupt);
    while (!g_interrupted) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    oricf::log_info("worker: shutting down");
    server.stop();
    return kExitOk;
  } catch (const oricf::TransportError& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_report(const std::string& onboard_path, const std::string& offload_path,
               double p_idle, double p_full, const std::string& format, bool use_mean) {
  if (!(p_full > p_idle) || !(p_idle > 0)) {
    std::cerr << "power params require --p-full > --p-idle > 0\n";
    return kExitUsage;
  }
  oricf::UtilizationTrace onboard, offload;
  try {
    onboard = oricf::load_trace_csv(onboard_path);
    offload = oricf::load_trace_csv(offload_path);
    oricf::EnergyReport report =
        oricf::build_report(onboard, offload, {p_idle, p_full}, use_mean);
    if (format == "json") {
      std::cout << oricf::report_to_json(report) << "\n";
    } else {
      std::cout << oricf::report_table(report);
    }
    return kExitOk;
  } catch (const oricf::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Declarative multimodal inference pipelines with edge offloading"};
  app.require_subcommand(1);

  std::string spec_path;
  std::vector<std::string> placements;
  std::optional<double> duration;
  std::optional<std::string> telemetry;
  bool timing = false;

  CLI::App* validate = app.add_subcommand("validate", "Check a pipeline file");
  validate->add_option("spec", spec_path, "pipeline YAML file")->required();

  CLI::App* run = app.add_subcommand("run", "Run a pipeline");
  run->add_option("spec", spec_path, "pipeline YAML file")->required();
  run->add_option("--placement", placements,
                  "override node placement, NODE=onboard|edge://host:port (repeatable)");
  double duration_value = 0.0;
  CLI::Option* duration_opt =
      run->add_option("--duration", duration_value, "stop after this many seconds");
  std::string telemetry_path;
  CLI::Option* telemetry_opt = run->add_option(
      "--telemetry", telemetry_path, "write a CPU utilization trace CSV for this run");
  run->add_flag("--timing", timing, "include wall time in the report JSON");

  CLI::App* worker = app.add_subcommand("worker", "Serve models for edge placements");
  std::string listen;
  worker->add_option("--listen", listen, "HOST:PORT to bind")->required();

  CLI::App* report = app.add_subcommand("report", "Utilization statistics and energy model");
  std::string onboard_path, offload_path, format = "table";
  double p_idle = 0.0, p_full = 0.0;
  bool use_mean = false;
  report->add_option("--onboard", onboard_path, "trace CSV of onboard execution")->required();
  report->add_option("--offload", offload_path, "trace CSV of offloaded execution")->required();
  report->add_option("--p-idle", p_idle, "idle power draw in watts")->required();
  report->add_option("--p-full", p_full, "full-load power draw in watts")->required();
  report->add_option("--format", format, "table or json")
      ->check(CLI::IsMember({"table", "json"}));
  report->add_flag("--use-mean", use_mean, "drive the power model with means, not medians");

  CLI::App* graph = app.add_subcommand("graph", "Emit the pipeline graph as DOT");
  graph->add_option("spec", spec_path, "pipeline YAML file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (duration_opt->count() > 0) duration = duration_value;
  if (telemetry_opt->count() > 0) telemetry = telemetry_path;

  if (validate->parsed()) return cmd_validate(spec_path);
  if (run->parsed()) return cmd_run(spec_path, placements, duration, telemetry, timing);
  if (worker->parsed()) return cmd_worker(listen);
  if (report->parsed()) {
    return cmd_report(onboard_path, offload_path, p_idle, p_full, format, use_mean);
  }
  if (graph->parsed()) return cmd_graph(spec_path);
  return kExitUsage;
}
