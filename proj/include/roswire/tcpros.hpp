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

// TCPROS connection headers: a 4-octet little-endian total length followed by
// length-prefixed "key=value" fields. This is the layer a ROS 1 node sends
// first on every topic/service connection, which makes it a reliable flow
// classifier for captured traffic.
namespace roswire::tcpros {

// Declared totals at or above this are rejected the same way a real node
// does ("a header of over a gigabyte was predicted").
inline constexpr uint32_t kMaxHeaderLength = 1u << 30;

enum class HeaderErrorKind { OversizedHeader, Truncated, MissingEquals };

class HeaderError : public Error {
public:
  HeaderError(HeaderErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  HeaderErrorKind kind() const { return kind_; }

private:
  HeaderErrorKind kind_;
};

struct TcprosHeader {
  std::vector<std::pair<std::string, std::string>> fields;

  std::optional<std::string> field(const std::string& key) const;
  bool operator==(const TcprosHeader&) const = default;
};

Bytes encode_tcpros_header(const TcprosHeader& header);

/// Trailing octets beyond the declared total are ignored, so a header can be
/// parsed straight out of a longer stream payload.
TcprosHeader parse_tcpros_header(std::span<const uint8_t> bytes);

/// Cheap classifier over a payload prefix: plausible total length
/// (0 < n < 2^30) consistent with what is available, and the first field
/// passes the '=' check when its octets are present.
bool looks_like_tcpros(std::span<const uint8_t> payload_prefix);

}  // namespace roswire::tcpros
