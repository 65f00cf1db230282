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

#include "roswire/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>

namespace roswire::net {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  int err = errno;
  std::string msg = what + ": " + std::strerror(err);
  if (err == ECONNREFUSED) throw ConnectionRefused(msg);
  throw SocketError(msg);
}

sockaddr_in make_addr(uint32_t address, uint16_t port) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(port);
  sa.sin_addr.s_addr = htonl(address);
  return sa;
}

void set_nonblocking(int fd, bool on) {
  int flags = fcntl(fd, F_GETFL, 0);
  if (flags < 0) throw_errno("fcntl(F_GETFL)");
  if (on) flags |= O_NONBLOCK; else flags &= ~O_NONBLOCK;
  if (fcntl(fd, F_SETFL, flags) < 0) throw_errno("fcntl(F_SETFL)");
}

bool wait_fd(int fd, short events, Millis timeout) {
  pollfd pfd{fd, events, 0};
  int rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (rc < 0) throw_errno("poll");
  return rc > 0;
}

uint16_t bound_port(int fd) {
  sockaddr_in sa{};
  socklen_t len = sizeof sa;
  if (getsockname(fd, reinterpret_cast<sockaddr*>(&sa), &len) != 0) {
    throw_errno("getsockname");
  }
  return ntohs(sa.sin_port);
}

}  // namespace

uint32_t resolve_ipv4(const std::string& host) {
  if (auto literal = parse_ipv4(host)) return *literal;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  int rc = getaddrinfo(host.c_str(), nullptr, &hints, &result);
  if (rc != 0 || result == nullptr) {
    throw SocketError("cannot resolve '" + host + "': " + gai_strerror(rc));
  }
  uint32_t addr = ntohl(
      reinterpret_cast<sockaddr_in*>(result->ai_addr)->sin_addr.s_addr);
  freeaddrinfo(result);
  return addr;
}

// --------------------------------------------------------------------------
// TcpStream

TcpStream::~TcpStream() { close(); }

TcpStream::TcpStream(TcpStream&& other) noexcept : fd_(other.fd_) {
  other.fd_ = -1;
}

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

void TcpStream::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

TcpStream TcpStream::connect(const std::string& host, uint16_t port,
                             Millis timeout) {
  uint32_t address = resolve_ipv4(host);
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw_errno("socket");
  TcpStream stream(fd);
  set_nonblocking(fd, true);
  sockaddr_in sa = make_addr(address, port);
  int rc = ::connect(fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa);
  if (rc != 0) {
    if (errno != EINPROGRESS) throw_errno("connect " + host);
    if (!wait_fd(fd, POLLOUT, timeout)) {
      throw SocketError("connect " + host + ":" + std::to_string(port) +
                        ": timed out");
    }
    int err = 0;
    socklen_t len = sizeof err;
    if (getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len) != 0) {
      throw_errno("getsockopt(SO_ERROR)");
    }
    if (err != 0) {
      errno = err;
      throw_errno("connect " + host + ":" + std::to_string(port));
    }
  }
  set_nonblocking(fd, false);
  return stream;
}

void TcpStream::send_all(std::span<const uint8_t> data) {
  size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("send");
    }
    sent += static_cast<size_t>(n);
  }
}

std::optional<Bytes> TcpStream::recv_some(Millis timeout, size_t max) {
  if (!wait_fd(fd_, POLLIN, timeout)) return std::nullopt;
  Bytes buf(max);
  ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
  if (n < 0) {
    if (errno == ECONNRESET) return Bytes{};
    throw_errno("recv");
  }
  buf.resize(static_cast<size_t>(n));
  return buf;
}

// --------------------------------------------------------------------------
// TcpListener

TcpListener::~TcpListener() { close(); }

TcpListener::TcpListener(TcpListener&& other) noexcept
    : fd_(other.fd_), port_(other.port_) {
  other.fd_ = -1;
}

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    port_ = other.port_;
    other.fd_ = -1;
  }
  return *this;
}

void TcpListener::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

TcpListener TcpListener::bind(const std::string& host, uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw_errno("socket");
  TcpListener listener;
  listener.fd_ = fd;
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in sa = make_addr(resolve_ipv4(host), port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
    int err = errno;
    throw BindFailed("bind " + host + ":" + std::to_string(port) + ": " +
                     std::strerror(err));
  }
  if (::listen(fd, 32) != 0) throw_errno("listen");
  listener.port_ = bound_port(fd);
  return listener;
}

std::optional<TcpStream> TcpListener::accept(Millis timeout) {
  if (!wait_fd(fd_, POLLIN, timeout)) return std::nullopt;
  int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) {
    if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) {
      return std::nullopt;
    }
    throw_errno("accept");
  }
  return TcpStream(fd);
}

// --------------------------------------------------------------------------
// UdpSocket

UdpSocket::~UdpSocket() { close(); }

UdpSocket::UdpSocket(UdpSocket&& other) noexcept
    : fd_(other.fd_), port_(other.port_) {
  other.fd_ = -1;
}

UdpSocket& UdpSocket::operator=(UdpSocket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    port_ = other.port_;
    other.fd_ = -1;
  }
  return *this;
}

void UdpSocket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

UdpSocket UdpSocket::bind(const std::string& host, uint16_t port) {
  int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd < 0) throw_errno("socket");
  UdpSocket sock;
  sock.fd_ = fd;
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in sa = make_addr(resolve_ipv4(host), port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
    int err = errno;
    throw BindFailed("bind udp " + host + ":" + std::to_string(port) + ": " +
                     std::strerror(err));
  }
  sock.port_ = bound_port(fd);
  return sock;
}

UdpSocket UdpSocket::open() {
  int fd = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd < 0) throw_errno("socket");
  UdpSocket sock;
  sock.fd_ = fd;
  return sock;
}

void UdpSocket::send_to(std::span<const uint8_t> data, uint32_t address,
                        uint16_t port) {
  sockaddr_in sa = make_addr(address, port);
  ssize_t n = ::sendto(fd_, data.data(), data.size(), 0,
                       reinterpret_cast<sockaddr*>(&sa), sizeof sa);
  if (n < 0) throw_errno("sendto " + format_ipv4(address));
}

std::optional<Datagram> UdpSocket::recv(Millis timeout) {
  if (!wait_fd(fd_, POLLIN, timeout)) return std::nullopt;
  Bytes buf(65536);
  sockaddr_in from{};
  socklen_t len = sizeof from;
  ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), 0,
                         reinterpret_cast<sockaddr*>(&from), &len);
  if (n < 0) {
    if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) {
      return std::nullopt;
    }
    throw_errno("recvfrom");
  }
  buf.resize(static_cast<size_t>(n));
  Datagram dg;
  dg.data = std::move(buf);
  dg.source_address = ntohl(from.sin_addr.s_addr);
  dg.source_port = ntohs(from.sin_port);
  return dg;
}

// --------------------------------------------------------------------------
// HTTP plumbing shared by the graph client and the simulators

namespace {

size_t find_blank_line(const Bytes& buf, size_t& skip) {
  static const uint8_t crlf[] = {'\r', '\n', '\r', '\n'};
  auto it = std::search(buf.begin(), buf.end(), std::begin(crlf), std::end(crlf));
  if (it != buf.end()) {
    skip = 4;
    return static_cast<size_t>(it - buf.begin());
  }
  static const uint8_t lflf[] = {'\n', '\n'};
  it = std::search(buf.begin(), buf.end(), std::begin(lflf), std::end(lflf));
  if (it != buf.end()) {
    skip = 2;
    return static_cast<size_t>(it - buf.begin());
  }
  return std::string::npos;
}

std::optional<size_t> content_length_of(const Bytes& head) {
  std::string text(head.begin(), head.end());
  std::string low;
  low.reserve(text.size());
  for (char c : text) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  size_t pos = low.find("content-length:");
  if (pos == std::string::npos) return std::nullopt;
  pos += 15;
  while (pos < low.size() && (low[pos] == ' ' || low[pos] == '\t')) ++pos;
  size_t value = 0;
  bool any = false;
  while (pos < low.size() && low[pos] >= '0' && low[pos] <= '9') {
    value = value * 10 + static_cast<size_t>(low[pos] - '0');
    ++pos;
    any = true;
  }
  if (!any) return std::nullopt;
  return value;
}

}  // namespace

Bytes read_http_message(TcpStream& stream, Millis timeout, bool is_request) {
  Bytes buf;
  auto deadline = std::chrono::steady_clock::now() + timeout;
  size_t head_end = std::string::npos;
  size_t skip = 0;
  for (;;) {
    head_end = find_blank_line(buf, skip);
    if (head_end != std::string::npos) break;
    auto left = std::chrono::duration_cast<Millis>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw SocketError("HTTP read timed out in headers");
    auto chunk = stream.recv_some(left);
    if (!chunk) throw SocketError("HTTP read timed out in headers");
    if (chunk->empty()) {
      if (buf.empty()) throw SocketError("peer closed without sending anything");
      throw SocketError("peer closed mid-headers");
    }
    buf.insert(buf.end(), chunk->begin(), chunk->end());
    if (buf.size() > (1u << 22)) throw SocketError("HTTP head too large");
  }

  Bytes head(buf.begin(), buf.begin() + static_cast<long>(head_end));
  size_t body_start = head_end + skip;
  auto declared = content_length_of(head);
  if (!declared && is_request) declared = 0;

  if (declared) {
    size_t want = body_start + *declared;
    if (want > (1u << 26)) throw SocketError("HTTP body too large");
    while (buf.size() < want) {
      auto left = std::chrono::duration_cast<Millis>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw SocketError("HTTP read timed out in body");
      auto chunk = stream.recv_some(left);
      if (!chunk) throw SocketError("HTTP read timed out in body");
      if (chunk->empty()) throw SocketError("peer closed mid-body");
      buf.insert(buf.end(), chunk->begin(), chunk->end());
    }
    buf.resize(want);
    return buf;
  }

  // Response without Content-Length: read until close.
  for (;;) {
    auto left = std::chrono::duration_cast<Millis>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw SocketError("HTTP read timed out in body");
    auto chunk = stream.recv_some(left);
    if (!chunk) throw SocketError("HTTP read timed out in body");
    if (chunk->empty()) return buf;
    buf.insert(buf.end(), chunk->begin(), chunk->end());
    if (buf.size() > (1u << 26)) throw SocketError("HTTP body too large");
  }
}

Bytes http_exchange(const std::string& host, uint16_t port,
                    std::span<const uint8_t> request, Millis timeout) {
  TcpStream stream = TcpStream::connect(host, port, timeout);
  stream.send_all(request);
  return read_http_message(stream, timeout, /*is_request=*/false);
}

void send_raw_ipv4(std::span<const uint8_t> packet, uint32_t dst_address) {
  int fd = ::socket(AF_INET, SOCK_RAW, IPPROTO_RAW);
  if (fd < 0) throw_errno("raw socket (needs CAP_NET_RAW)");
  sockaddr_in sa = make_addr(dst_address, 0);
  ssize_t n = ::sendto(fd, packet.data(), packet.size(), 0,
                       reinterpret_cast<sockaddr*>(&sa), sizeof sa);
  int err = errno;
  ::close(fd);
  if (n < 0) {
    errno = err;
    throw_errno("raw sendto");
  }
}

}  // namespace roswire::net
