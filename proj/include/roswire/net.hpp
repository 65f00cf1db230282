// Copyright 2026 roswire contributors
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

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "roswire/bytes.hpp"
#include "roswire/error.hpp"

// Thin RAII layer over POSIX IPv4 sockets with poll-based timeouts. All the
// protocol logic stays in the codec modules; this file only moves bytes.
namespace roswire::net {

using Millis = std::chrono::milliseconds;

class SocketError : public Error {
public:
  using Error::Error;
};

class ConnectionRefused : public SocketError {
public:
  using SocketError::SocketError;
};

class BindFailed : public SocketError {
public:
  using SocketError::SocketError;
};

/// Numeric IPv4 literal or resolvable hostname -> host-order address.
uint32_t resolve_ipv4(const std::string& host);

class TcpStream {
public:
  TcpStream() = default;
  explicit TcpStream(int fd) : fd_(fd) {}
  ~TcpStream();
  TcpStream(TcpStream&& other) noexcept;
  TcpStream& operator=(TcpStream&& other) noexcept;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  static TcpStream connect(const std::string& host, uint16_t port,
                           Millis timeout);

  bool valid() const { return fd_ >= 0; }
  void send_all(std::span<const uint8_t> data);
  /// Up to buffer-size octets; empty result = orderly close; nullopt = timeout.
  std::optional<Bytes> recv_some(Millis timeout, size_t max = 16384);
  void close();

private:
  int fd_ = -1;
};

class TcpListener {
public:
  TcpListener() = default;
  ~TcpListener();
  TcpListener(TcpListener&& other) noexcept;
  TcpListener& operator=(TcpListener&& other) noexcept;
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  /// port 0 binds an ephemeral port; throws BindFailed (EADDRINUSE included).
  static TcpListener bind(const std::string& host, uint16_t port);

  uint16_t local_port() const { return port_; }
  std::optional<TcpStream> accept(Millis timeout);
  void close();

private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

struct Datagram {
  Bytes data;
  uint32_t source_address = 0;  // host order
  uint16_t source_port = 0;
};

class UdpSocket {
public:
  UdpSocket() = default;
  ~UdpSocket();
  UdpSocket(UdpSocket&& other) noexcept;
  UdpSocket& operator=(UdpSocket&& other) noexcept;
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;

  static UdpSocket bind(const std::string& host, uint16_t port);
  static UdpSocket open();  // unbound sender

  uint16_t local_port() const { return port_; }
  void send_to(std::span<const uint8_t> data, uint32_t address, uint16_t port);
  std::optional<Datagram> recv(Millis timeout);
  void close();

private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

/// Reads one HTTP message off the stream: head until the blank line, body per
/// Content-Length (or to EOF when a response carries none).
Bytes read_http_message(TcpStream& stream, Millis timeout, bool is_request);

/// One-shot HTTP exchange: connect, write the request, read the response.
Bytes http_exchange(const std::string& host, uint16_t port,
                    std::span<const uint8_t> request, Millis timeout);

/// Sends a pre-built IPv4 packet (IP header included) through a raw socket.
/// Requires CAP_NET_RAW; used only by live DoS emission behind the gate.
void send_raw_ipv4(std::span<const uint8_t> packet, uint32_t dst_address);

}  // namespace roswire::net
