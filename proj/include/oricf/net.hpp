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

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oricf/errors.hpp"

namespace oricf {

/// Owning TCP socket. Move-only; closes on destruction.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  static Socket connect(const std::string& host, uint16_t port);

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }
  void close();
  /// Half-close for writing; the peer sees EOF.
  void shutdown_write();

  /// Writes the whole buffer or throws TransportError.
  void write_all(std::span<const uint8_t> data);
  void write_all(std::string_view text);

  /// Reads exactly n bytes; returns false on clean EOF at a boundary
  /// (0 bytes read), throws TransportError on partial reads or errors.
  bool read_exact(std::span<uint8_t> out);

  /// Reads until '\n' (stripped) or EOF; nullopt on EOF with no data.
  std::optional<std::string> read_line();

 private:
  int fd_ = -1;
  std::string line_buf_;
};

/// Listening socket bound to host:port (port 0 picks a free port).
/// close() may be called from another thread to unblock accept(); the
/// descriptor is atomic for exactly that handoff.
class Listener {
 public:
  Listener() = default;
  Listener(const std::string& host, uint16_t port);
  Listener(Listener&& other) noexcept;
  Listener& operator=(Listener&& other) noexcept;
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;
  ~Listener();

  uint16_t port() const { return port_; }
  bool valid() const { return fd_.load() >= 0; }
  /// Blocks for the next connection; empty socket after close().
  Socket accept();
  /// Unblocks pending accept() calls.
  void close();

 private:
  std::atomic<int> fd_{-1};
  uint16_t port_ = 0;
};

/// Splits "host:port"; throws Error on malformed input.
std::pair<std::string, uint16_t> parse_host_port(const std::string& text);

}  // namespace oricf
