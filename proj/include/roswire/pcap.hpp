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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roswire/bytes.hpp"
#include "roswire/error.hpp"

// Classic pcap container (microsecond timestamps, Ethernet link type) plus
// IPv4/TCP/UDP frame composition with real checksums. IPv4 only.
namespace roswire::pcap {

enum class PcapErrorKind { IoError, NotAPcap };

class PcapError : public Error {
public:
  PcapError(PcapErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  PcapErrorKind kind() const { return kind_; }

private:
  PcapErrorKind kind_;
};

struct Frame {
  uint32_t ts_sec = 0;
  uint32_t ts_usec = 0;
  Bytes data;  // starts at the Ethernet header
};

void write_pcap_frames(const std::string& path, const std::vector<Frame>& frames);
std::vector<Frame> read_pcap_frames(const std::string& path);

/// RFC 1071 ones'-complement sum over the given octets.
uint16_t inet_checksum(std::span<const uint8_t> data);

struct TcpFields {
  uint32_t src_ip = 0;   // host order, as all addresses below
  uint32_t dst_ip = 0;
  uint16_t src_port = 0;
  uint16_t dst_port = 0;
  uint32_t seq = 0;
  uint32_t ack = 0;
  uint8_t flags = 0;     // raw TCP flag bits (FIN 0x01, SYN 0x02, ...)
  uint16_t ip_id = 0;
  uint8_t ttl = 64;
  Bytes payload;
};

struct UdpFields {
  uint32_t src_ip = 0;
  uint32_t dst_ip = 0;
  uint16_t src_port = 0;
  uint16_t dst_port = 0;
  uint16_t ip_id = 0;
  uint8_t ttl = 64;
  Bytes payload;
};

/// Ethernet + IPv4 + TCP with checksums filled in.
Bytes build_tcp_frame(const TcpFields& fields);
/// Ethernet + IPv4 + UDP with checksums filled in.
Bytes build_udp_frame(const UdpFields& fields);

std::optional<TcpFields> parse_tcp_frame(std::span<const uint8_t> frame);
std::optional<UdpFields> parse_udp_frame(std::span<const uint8_t> frame);

/// IPv4 packet only (no Ethernet), for raw-socket emission.
Bytes build_tcp_packet(const TcpFields& fields);

}  // namespace roswire::pcap
