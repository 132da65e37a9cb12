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

#include "oricf/bus.hpp"

#include <algorithm>
#include <chrono>

namespace oricf {

struct Subscription::Queue {
  std::mutex mu;
  std::condition_variable space;
  std::condition_variable data;
  std::deque<Message> items;
  size_t capacity = Bus::kDefaultCapacity;  // 0 = unbounded
  bool closed = false;
};

struct Bus::Channel {
  ChannelDecl decl;
  uint64_t next_seq = 0;
  bool producer_claimed = false;
  bool closed = false;
  std::vector<std::shared_ptr<Subscription::Queue>> subscribers;
};

namespace {

int64_t monotonic_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

Bus::Bus(const std::vector<ChannelDecl>& channels, size_t default_capacity)
    : default_capacity_(default_capacity), epoch_ns_(monotonic_ns()) {
  for (const ChannelDecl& decl : channels) {
    auto [it, inserted] = channels_.emplace(decl.name, std::make_unique<Channel>());
    if (!inserted) {
      throw Error("duplicate channel '" + decl.name + "'");
    }
    it->second->decl = decl;
  }
}

Bus::~Bus() { shutdown(); }

std::vector<std::string> Bus::channel_names() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> names;
  names.reserve(channels_.size());
  for (const auto& [name, _] : channels_) names.push_back(name);
  return names;
}

Bus::Channel& Bus::channel_ref(const std::string& name) {
  auto it = channels_.find(name);
  if (it == channels_.end()) throw Error("unknown channel '" + name + "'");
  return *it->second;
}

const Bus::Channel& Bus::channel_ref(const std::string& name) const {
  auto it = channels_.find(name);
  if (it == channels_.end()) throw Error("unknown channel '" + name + "'");
  return *it->second;
}

PayloadKind Bus::channel_kind(const std::string& channel) const {
  std::lock_guard lock(mu_);
  return channel_ref(channel).decl.kind;
}

bool Bus::has_channel(const std::string& channel) const {
  std::lock_guard lock(mu_);
  return channels_.count(channel) > 0;
}

Producer Bus::register_producer(const std::string& channel) {
  std::lock_guard lock(mu_);
  Channel& ch = channel_ref(channel);
  if (ch.producer_claimed) {
    throw Error("channel '" + channel + "' already has a producer");
  }
  ch.producer_claimed = true;
  Producer p;
  p.bus_ = this;
  p.channel_ = channel;
  return p;
}

Subscription Bus::subscribe(const std::string& channel, size_t capacity) {
  std::lock_guard lock(mu_);
  Channel& ch = channel_ref(channel);
  auto queue = std::make_shared<Subscription::Queue>();
  queue->capacity = capacity;
  queue->closed = ch.closed || shutdown_;
  ch.subscribers.push_back(queue);
  Subscription sub;
  sub.channel_ = channel;
  sub.queue_ = std::move(queue);
  return sub;
}

uint64_t Bus::publish_impl(const std::string& channel, Payload payload) {
  Message msg;
  std::vector<std::shared_ptr<Subscription::Queue>> targets;
  {
    std::lock_guard lock(mu_);
    Channel& ch = channel_ref(channel);
    if (ch.closed || shutdown_) {
      throw Error("publish on closed channel '" + channel + "'");
    }
    if (!kind_accepts(ch.decl.kind, payload)) {
      throw Error("kind mismatch on channel '" + channel + "': expected " +
                  std::string(to_string(ch.decl.kind)) + ", got " +
                  std::string(to_string(kind_of(payload))));
    }
    if (auto err = validate_payload(payload)) {
      throw Error("invalid payload on channel '" + channel + "': " + *err);
    }
    msg.channel = channel;
    msg.seq = ch.next_seq++;
    msg.timestamp_ns = monotonic_ns() - epoch_ns_;
    msg.payload = std::make_shared<const Payload>(std::move(payload));
    targets = ch.subscribers;
  }
  for (auto& queue : targets) {
    std::unique_lock qlock(queue->mu);
    queue->space.wait(qlock, [&] {
      return queue->closed || queue->capacity == 0 || queue->items.size() < queue->capacity;
    });
    if (queue->closed) {
      // Bus shut down while waiting for space; the run is being aborted.
      throw Error("bus shut down during publish on '" + channel + "'");
    }
    queue->items.push_back(msg);
    queue->data.notify_one();
  }
  return msg.seq;
}

void Bus::close_channel(const std::string& channel) {
  std::vector<std::shared_ptr<Subscription::Queue>> targets;
  {
    std::lock_guard lock(mu_);
    auto it = channels_.find(channel);
    if (it == channels_.end()) return;
    it->second->closed = true;
    targets = it->second->subscribers;
  }
  for (auto& queue : targets) {
    std::lock_guard qlock(queue->mu);
    queue->closed = true;
    queue->data.notify_all();
    queue->space.notify_all();
  }
}

void Bus::shutdown() {
  std::vector<std::shared_ptr<Subscription::Queue>> targets;
  {
    std::lock_guard lock(mu_);
    if (shutdown_) return;
    shutdown_ = true;
    for (auto& [name, ch] : channels_) {
      ch->closed = true;
      for (auto& queue : ch->subscribers) targets.push_back(queue);
    }
  }
  for (auto& queue : targets) {
    std::lock_guard qlock(queue->mu);
    queue->closed = true;
    queue->data.notify_all();
    queue->space.notify_all();
  }
}

Producer::Producer(Producer&& other) noexcept
    : bus_(other.bus_), channel_(std::move(other.channel_)) {
  other.bus_ = nullptr;
}

Producer& Producer::operator=(Producer&& other) noexcept {
  if (this != &other) {
    close();
    bus_ = other.bus_;
    channel_ = std::move(other.channel_);
    other.bus_ = nullptr;
  }
  return *this;
}

Producer::~Producer() { close(); }

uint64_t Producer::publish(Payload payload) {
  if (!bus_) throw Error("publish on moved-from or closed producer");
  return bus_->publish_impl(channel_, std::move(payload));
}

void Producer::close() {
  if (bus_) {
    bus_->close_channel(channel_);
    bus_ = nullptr;
  }
}

std::optional<Message> Subscription::pop() {
  if (!queue_) throw Error("pop on empty subscription");
  std::unique_lock lock(queue_->mu);
  queue_->data.wait(lock, [&] { return queue_->closed || !queue_->items.empty(); });
  if (queue_->items.empty()) return std::nullopt;
  Message msg = std::move(queue_->items.front());
  queue_->items.pop_front();
  queue_->space.notify_one();
  return msg;
}

std::optional<Message> Subscription::try_pop() {
  if (!queue_) throw Error("pop on empty subscription");
  std::lock_guard lock(queue_->mu);
  if (queue_->items.empty()) return std::nullopt;
  Message msg = std::move(queue_->items.front());
  queue_->items.pop_front();
  queue_->space.notify_one();
  return msg;
}

bool Subscription::exhausted() const {
  if (!queue_) return true;
  std::lock_guard lock(queue_->mu);
  return queue_->closed && queue_->items.empty();
}

}  // namespace oricf
