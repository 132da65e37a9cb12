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

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "oricf/errors.hpp"
#include "oricf/payload.hpp"

namespace oricf {

struct ChannelDecl {
  std::string name;
  PayloadKind kind = PayloadKind::Tensor;
  bool operator==(const ChannelDecl&) const = default;
};

/// Envelope delivered to subscribers. `seq` counts per channel from 0;
/// `timestamp_ns` is measured from a monotonic epoch fixed when the bus
/// was created. The payload is shared, never mutated after publish.
struct Message {
  std::string channel;
  uint64_t seq = 0;
  int64_t timestamp_ns = 0;
  std::shared_ptr<const Payload> payload;
};

class Bus;

/// Single-consumer view of one channel. Receives every message published
/// after the subscription was created, in seq order, over a bounded queue
/// (publishers block while it is full).
class Subscription {
 public:
  /// Blocks until a message arrives or the channel is closed and drained.
  std::optional<Message> pop();
  /// Non-blocking variant; nullopt when nothing is pending.
  std::optional<Message> try_pop();
  /// True once the producer closed the channel and the queue is drained.
  bool exhausted() const;

  const std::string& channel() const { return channel_; }

 private:
  friend class Bus;
  struct Queue;
  std::string channel_;
  std::shared_ptr<Queue> queue_;
};

/// Exclusive write capability for one channel; at most one exists per
/// channel at a time. Destroying (or close()-ing) it marks the channel
/// closed so subscribers can drain and stop.
class Producer {
 public:
  Producer() = default;
  Producer(Producer&&) noexcept;
  Producer& operator=(Producer&&) noexcept;
  Producer(const Producer&) = delete;
  Producer& operator=(const Producer&) = delete;
  ~Producer();

  /// Validates and publishes; blocks while any subscriber queue is full.
  /// Returns the assigned sequence number.
  uint64_t publish(Payload payload);
  void close();
  const std::string& channel() const { return channel_; }
  explicit operator bool() const { return bus_ != nullptr; }

 private:
  friend class Bus;
  Bus* bus_ = nullptr;
  std::string channel_;
};

/// In-process typed publish/subscribe bus. One queue per subscription,
/// capacity-bounded with blocking backpressure (nothing is ever dropped).
class Bus {
 public:
  static constexpr size_t kDefaultCapacity = 64;

  explicit Bus(const std::vector<ChannelDecl>& channels,
               size_t default_capacity = kDefaultCapacity);
  ~Bus();
  Bus(const Bus&) = delete;
  Bus& operator=(const Bus&) = delete;

  std::vector<std::string> channel_names() const;
  PayloadKind channel_kind(const std::string& channel) const;
  bool has_channel(const std::string& channel) const;

  /// Claims the single-writer slot of `channel`.
  Producer register_producer(const std::string& channel);

  /// Adds a subscriber. `capacity` 0 means unbounded (used by taps that
  /// must never exert backpressure).
  Subscription subscribe(const std::string& channel, size_t capacity);
  Subscription subscribe(const std::string& channel) {
    return subscribe(channel, default_capacity_);
  }

  /// Wakes every blocked publisher/consumer and closes all channels.
  void shutdown();

 private:
  friend class Producer;
  struct Channel;

  Channel& channel_ref(const std::string& name);
  const Channel& channel_ref(const std::string& name) const;
  uint64_t publish_impl(const std::string& channel, Payload payload);
  void close_channel(const std::string& channel);

  size_t default_capacity_;
  int64_t epoch_ns_;
  mutable std::mutex mu_;
  std::map<std::string, std::unique_ptr<Channel>> channels_;
  bool shutdown_ = false;
};

}  // namespace oricf
