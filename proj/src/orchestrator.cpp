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

#include "oricf/orchestrator.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "oricf/log.hpp"
#include "oricf/telemetry.hpp"
#include "oricf/wire.hpp"

namespace oricf {

bool RunReport::any_failed() const {
  return std::any_of(nodes.begin(), nodes.end(),
                     [](const NodeReport& n) { return n.failed; });
}

std::string RunReport::to_json(bool include_timing) const {
  nlohmann::ordered_json j;
  auto node_array = nlohmann::ordered_json::array();
  for (const NodeReport& n : nodes) {
    nlohmann::ordered_json entry;
    entry["name"] = n.name;
    entry["messages_in"] = n.messages_in;
    entry["messages_out"] = n.messages_out;
    entry["errors"] = n.errors;
    entry["failed"] = n.failed;
    if (!n.first_error.empty()) entry["first_error"] = n.first_error;
    node_array.push_back(std::move(entry));
  }
  j["nodes"] = std::move(node_array);
  if (include_timing) j["wall_time_s"] = wall_time_s;
  if (telemetry_path) j["telemetry_path"] = *telemetry_path;
  return j.dump();
}

namespace {

/// Uniform local/remote inference behind the node task.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual Payload infer(const std::vector<Payload>& inputs, const InferenceContext& ctx) = 0;
};

class LocalExecutor final : public Executor {
 public:
  explicit LocalExecutor(ModelHandle handle) : handle_(std::move(handle)) {}
  Payload infer(const std::vector<Payload>& inputs, const InferenceContext& ctx) override {
    return handle_.infer(inputs, ctx);
  }

 private:
  ModelHandle handle_;
};

class RemoteExecutor final : public Executor {
 public:
  explicit RemoteExecutor(RemoteModelProxy proxy) : proxy_(std::move(proxy)) {}
  Payload infer(const std::vector<Payload>& inputs, const InferenceContext& ctx) override {
    return proxy_.infer(inputs, ctx);
  }

 private:
  RemoteModelProxy proxy_;
};

struct SourceRuntime {
  const SourceSpec* spec = nullptr;
  size_t index = 0;
  std::unique_ptr<SourceAdapter> adapter;
  Producer producer;
  uint64_t interval_ms = 0;
};

struct SinkRuntime {
  const SinkSpec* spec = nullptr;
  std::unique_ptr<SinkAdapter> adapter;
  Subscription sub;
  bool broken = false;
};

struct NodeRuntime {
  const NodeSpec* spec = nullptr;
  std::unique_ptr<Executor> executor;
  Subscription trigger;
  std::vector<Subscription> context_subs;
  std::optional<Producer> raw_producer;
  std::map<std::string, Producer> step_producers;
  PostChain chain;
  InferenceContext ctx;
  NodeReport report;
};

}  // namespace

struct Pipeline::Impl {
  PipelineSpec spec;
  std::unique_ptr<Bus> bus;
  std::vector<SourceRuntime> sources;
  std::vector<SinkRuntime> sinks;
  std::vector<NodeRuntime> nodes;  // topological order
  bool ran = false;

  void drain_context(NodeRuntime& node) {
    for (Subscription& sub : node.context_subs) {
      while (auto msg = sub.try_pop()) {
        node.ctx.latest[msg->channel] = *msg->payload;
      }
    }
  }

  void process_message(NodeRuntime& node, const Message& msg) {
    node.report.messages_in++;
    if (node.report.failed) {
      node.report.errors++;
      return;
    }
    drain_context(node);
    try {
      std::vector<Payload> inputs{*msg.payload};
      Payload output = node.executor->infer(inputs, node.ctx);
      if (node.raw_producer) {
        node.raw_producer->publish(output);
        node.report.messages_out++;
      }
      node.chain.run(std::move(output), msg.payload.get(), node.ctx,
                     [&](const std::string& channel, const Payload& payload) {
                       node.step_producers.at(channel).publish(payload);
                       node.report.messages_out++;
                     });
    } catch (const TransportError& e) {
      node.report.errors++;
      node.report.failed = true;
      if (node.report.first_error.empty()) {
        node.report.first_error = std::string("node '") + node.spec->name + "': " + e.what();
      }
      log_error(node.report.first_error);
    } catch (const std::exception& e) {
      node.report.errors++;
      if (node.report.first_error.empty()) {
        node.report.first_error = std::string("node '") + node.spec->name + "': " + e.what();
      }
      log_warn("node '" + node.spec->name + "' dropped message seq " +
               std::to_string(msg.seq) + ": " + e.what());
    }
  }

  void close_node_outputs(NodeRuntime& node) {
    if (node.raw_producer) node.raw_producer->close();
    for (auto& [channel, producer] : node.step_producers) producer.close();
  }

  void sink_write(SinkRuntime& sink, const Message& msg) {
    if (sink.broken) return;
    try {
      sink.adapter->write(*msg.payload);
    } catch (const std::exception& e) {
      sink.broken = true;
      log_error("sink '" + sink.spec->adapter + "' on '" + sink.spec->channel +
                "' stopped: " + e.what());
    }
  }

  // One pass over nodes (topological order) and sinks; true if any
  // message moved.
  bool pump_once() {
    bool progressed = false;
    for (NodeRuntime& node : nodes) {
      while (auto msg = node.trigger.try_pop()) {
        process_message(node, *msg);
        progressed = true;
      }
    }
    for (SinkRuntime& sink : sinks) {
      while (auto msg = sink.sub.try_pop()) {
        sink_write(sink, *msg);
        progressed = true;
      }
    }
    return progressed;
  }

  void pump() {
    while (pump_once()) {
    }
  }

  RunResult run_sequenced(const RunOptions& options, RunReport& report);
  RunResult run_free(const RunOptions& options, RunReport& report);
};

Pipeline::Pipeline() : impl_(new Impl()) {}
Pipeline::~Pipeline() = default;
Pipeline::Pipeline(Pipeline&&) noexcept = default;

Pipeline Pipeline::build(const PipelineSpec& spec, const BackendRegistry& registry,
                         const AdapterRegistry& adapters) {
  GraphResult graph = validate_graph(spec);
  if (!graph.ok()) {
    throw Error("invalid pipeline graph:\n" + format_diagnostics(graph.diagnostics));
  }

  Pipeline pipeline;
  Impl& impl = *pipeline.impl_;
  impl.spec = spec;
  impl.bus = std::make_unique<Bus>(impl.spec.channels);
  Bus& bus = *impl.bus;

  for (size_t i = 0; i < impl.spec.sources.size(); ++i) {
    const SourceSpec& decl = impl.spec.sources[i];
    SourceRuntime runtime;
    runtime.spec = &decl;
    runtime.index = i;
    try {
      runtime.adapter = adapters.make_source(decl.adapter, decl.params);
    } catch (const Error& e) {
      throw Error("source[" + std::to_string(i) + "] (" + decl.adapter + "): " + e.what());
    }
    auto it = decl.params.find("interval_ms");
    if (it != decl.params.end()) {
      runtime.interval_ms = std::strtoull(it->second.c_str(), nullptr, 10);
    }
    runtime.producer = bus.register_producer(decl.channel);
    impl.sources.push_back(std::move(runtime));
  }

  for (size_t i = 0; i < impl.spec.sinks.size(); ++i) {
    const SinkSpec& decl = impl.spec.sinks[i];
    SinkRuntime runtime;
    runtime.spec = &decl;
    try {
      runtime.adapter = adapters.make_sink(decl.adapter, decl.params);
    } catch (const Error& e) {
      throw Error("sink[" + std::to_string(i) + "] (" + decl.adapter + "): " + e.what());
    }
    runtime.sub = bus.subscribe(decl.channel);
    impl.sinks.push_back(std::move(runtime));
  }

  for (const std::string& name : graph.order) {
    const NodeSpec* node_spec = impl.spec.find_node(name);
    NodeRuntime runtime;
    runtime.spec = node_spec;
    runtime.report.name = name;
    PlacementTarget target = impl.spec.placement_for(name);
    if (target.kind == PlacementTarget::Kind::Onboard) {
      try {
        runtime.executor = std::make_unique<LocalExecutor>(
            registry.load_model(node_spec->model_id, node_spec->backend, node_spec->config));
      } catch (const BackendError& e) {
        throw Error("node '" + name + "': " + e.what());
      }
    } else {
      try {
        runtime.executor = std::make_unique<RemoteExecutor>(
            RemoteModelProxy(target.host, target.port, node_spec->model_id,
                             node_spec->backend, node_spec->config));
      } catch (const TransportError& e) {
        throw Error("node '" + name + "' placement " + target.to_string() + ": " + e.what());
      } catch (const BackendError& e) {
        throw Error("node '" + name + "' placement " + target.to_string() + ": " + e.what());
      }
    }
    runtime.trigger = bus.subscribe(node_spec->inputs[0]);
    for (const std::string& chan : node_spec->context_channels()) {
      runtime.context_subs.push_back(bus.subscribe(chan));
    }
    if (node_spec->publish_raw) {
      runtime.raw_producer = bus.register_producer(*node_spec->publish_raw);
    }
    runtime.chain = PostChain::compile(node_spec->post);
    for (const std::string& chan : runtime.chain.publish_channels()) {
      runtime.step_producers.emplace(chan, bus.register_producer(chan));
    }
    impl.nodes.push_back(std::move(runtime));
  }

  return pipeline;
}

RunResult Pipeline::Impl::run_sequenced(const RunOptions& options, RunReport& report) {
  RunResult result;

  // Sources replay in rank order; each message propagates through the
  // whole graph before the next is emitted.
  std::vector<SourceRuntime*> ordered;
  for (SourceRuntime& s : sources) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(), [](const SourceRuntime* a,
                                                      const SourceRuntime* b) {
    return a->spec->sequence.value_or(0) < b->spec->sequence.value_or(0);
  });

  const bool skip_all = options.duration_s && *options.duration_s <= 0.0;
  if (!skip_all) {
    for (SourceRuntime* source : ordered) {
      while (true) {
        std::optional<Payload> payload;
        try {
          payload = source->adapter->next();
        } catch (const std::exception& e) {
          log_error("source '" + source->spec->adapter + "' on '" + source->spec->channel +
                    "' stopped: " + e.what());
          break;
        }
        if (!payload) break;
        source->producer.publish(std::move(*payload));
        pump();
      }
      source->producer.close();
    }
    pump();
    for (NodeRuntime& node : nodes) close_node_outputs(node);
    pump();
  } else {
    for (SourceRuntime* source : ordered) source->producer.close();
    for (NodeRuntime& node : nodes) close_node_outputs(node);
  }
  for (SinkRuntime& sink : sinks) sink.adapter->close();

  for (NodeRuntime& node : nodes) report.nodes.push_back(node.report);
  return result;
}

RunResult Pipeline::Impl::run_free(const RunOptions& options, RunReport& report) {
  RunResult result;

  if (options.duration_s && *options.duration_s <= 0.0) {
    for (SourceRuntime& source : sources) source.producer.close();
    for (NodeRuntime& node : nodes) close_node_outputs(node);
    for (SinkRuntime& sink : sinks) sink.adapter->close();
    for (NodeRuntime& node : nodes) report.nodes.push_back(node.report);
    return result;
  }

  std::vector<std::thread> threads;
  std::atomic<size_t> sources_done{0};

  for (SourceRuntime& source : sources) {
    threads.emplace_back([&source, &sources_done] {
      try {
        while (auto payload = source.adapter->next()) {
          source.producer.publish(std::move(*payload));
          if (source.interval_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(source.interval_ms));
          }
        }
      } catch (const std::exception& e) {
        log_error("source '" + source.spec->adapter + "' on '" + source.spec->channel +
                  "' stopped: " + e.what());
      }
      source.producer.close();
      sources_done.fetch_add(1);
    });
  }

  for (NodeRuntime& node : nodes) {
    threads.emplace_back([this, &node] {
      while (auto msg = node.trigger.pop()) process_message(node, *msg);
      close_node_outputs(node);
    });
  }

  for (SinkRuntime& sink : sinks) {
    threads.emplace_back([this, &sink] {
      while (auto msg = sink.sub.pop()) sink_write(sink, *msg);
      sink.adapter->close();
    });
  }

  if (options.duration_s) {
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::nanoseconds>(
                              std::chrono::duration<double>(*options.duration_s));
    while (std::chrono::steady_clock::now() < deadline &&
           sources_done.load() < sources.size()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    if (sources_done.load() < sources.size()) {
      for (SourceRuntime& source : sources) source.adapter->request_stop();
      // Grace period for adapters to notice, then hard-stop the bus so
      // blocked publishers abort.
      const auto grace = std::chrono::steady_clock::now() + std::chrono::seconds(1);
      while (std::chrono::steady_clock::now() < grace &&
             sources_done.load() < sources.size()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
      if (sources_done.load() < sources.size()) bus->shutdown();
    }
  }

  for (std::thread& t : threads) t.join();
  for (NodeRuntime& node : nodes) report.nodes.push_back(node.report);
  return result;
}

RunResult Pipeline::run(const RunOptions& options) {
  Impl& impl = *impl_;
  if (impl.ran) throw Error("pipeline already ran; build a fresh one");
  impl.ran = true;

  // Taps must exist before the first publish.
  std::vector<Subscription> taps;
  if (options.capture_channels) {
    for (const ChannelDecl& decl : impl.spec.channels) {
      taps.push_back(impl.bus->subscribe(decl.name, 0));
    }
  }

  std::optional<std::thread> sampler_thread;
  UtilizationTrace telemetry_trace;
  std::atomic<bool> sampling{true};
  std::unique_ptr<HostSampler> sampler;
  if (options.telemetry_csv) {
    sampler = std::make_unique<HostSampler>();
    sampler_thread.emplace([&] {
      using clock = std::chrono::steady_clock;
      const auto start = clock::now();
      sampler->next(0.0);
      telemetry_trace.source_label = sampler->label();
      while (sampling.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(options.telemetry_interval_ms));
        const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
        if (auto s = sampler->next(elapsed)) telemetry_trace.samples.push_back(*s);
      }
    });
  }

  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  RunResult result;
  try {
    result = impl.spec.sequenced() ? impl.run_sequenced(options, report)
                                   : impl.run_free(options, report);
  } catch (...) {
    sampling.store(false);
    if (sampler_thread) sampler_thread->join();
    throw;
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (sampler_thread) {
    sampling.store(false);
    sampler_thread->join();
    std::ofstream out(*options.telemetry_csv, std::ios::trunc);
    if (!out) throw Error("cannot write telemetry CSV '" + *options.telemetry_csv + "'");
    out << trace_to_csv(telemetry_trace);
    report.telemetry_path = options.telemetry_csv;
  }

  for (Subscription& tap : taps) {
    auto& bucket = result.captures[tap.channel()];
    while (auto msg = tap.try_pop()) bucket.push_back(encode_payload(*msg->payload));
  }
  if (options.capture_channels) {
    // Channels with no traffic still appear, keyed with empty vectors.
    for (const ChannelDecl& decl : impl.spec.channels) result.captures[decl.name];
  }

  result.report = std::move(report);
  return result;
}

// ---------------------------------------------------------------------------
// DOT rendering
// ---------------------------------------------------------------------------

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string graph_dot(const PipelineSpec& spec) {
  std::ostringstream os;
  os << "digraph pipeline {\n";
  os << "  rankdir=LR;\n";
  for (const ChannelDecl& c : spec.channels) {
    os << "  " << dot_quote(c.name) << " [shape=ellipse];\n";
  }
  for (const NodeSpec& n : spec.nodes) {
    os << "  " << dot_quote(n.name) << " [shape=box];\n";
  }
  for (size_t i = 0; i < spec.sources.size(); ++i) {
    std::string id = "source[" + std::to_string(i) + "]";
    os << "  " << dot_quote(id) << " [shape=plaintext, label="
       << dot_quote(spec.sources[i].adapter) << "];\n";
    os << "  " << dot_quote(id) << " -> " << dot_quote(spec.sources[i].channel) << ";\n";
  }
  for (const NodeSpec& n : spec.nodes) {
    for (const std::string& input : n.inputs) {
      os << "  " << dot_quote(input) << " -> " << dot_quote(n.name) << ";\n";
    }
    std::vector<std::string> listed(n.inputs.begin(), n.inputs.end());
    for (const std::string& chan : n.context_channels()) {
      if (std::find(listed.begin(), listed.end(), chan) != listed.end()) continue;
      os << "  " << dot_quote(chan) << " -> " << dot_quote(n.name) << " [style=dashed];\n";
    }
    if (n.publish_raw) {
      os << "  " << dot_quote(n.name) << " -> " << dot_quote(*n.publish_raw) << ";\n";
    }
    for (const PostStepSpec& step : n.post) {
      if (step.publish) {
        os << "  " << dot_quote(n.name) << " -> " << dot_quote(*step.publish) << ";\n";
      }
    }
  }
  for (size_t i = 0; i < spec.sinks.size(); ++i) {
    std::string id = "sink[" + std::to_string(i) + "]";
    os << "  " << dot_quote(id) << " [shape=plaintext, label="
       << dot_quote(spec.sinks[i].adapter) << "];\n";
    os << "  " << dot_quote(spec.sinks[i].channel) << " -> " << dot_quote(id) << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace oricf
