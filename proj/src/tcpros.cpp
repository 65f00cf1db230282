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

#include "roswire/tcpros.hpp"

#include <algorithm>

namespace roswire::tcpros {

std::optional<std::string> TcprosHeader::field(const std::string& key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  return std::nullopt;
}

Bytes encode_tcpros_header(const TcprosHeader& header) {
  ByteWriter body;
  for (const auto& [key, value] : header.fields) {
    std::string field = key + "=" + value;
    body.u32le(static_cast<uint32_t>(field.size()));
    body.raw(field);
  }
  ByteWriter out;
  out.u32le(static_cast<uint32_t>(body.size()));
  out.raw(std::span<const uint8_t>(body.bytes()));
  return out.take();
}

TcprosHeader parse_tcpros_header(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  uint32_t total;
  try {
    total = r.u32le();
  } catch (const TruncatedInput&) {
    throw HeaderError(HeaderErrorKind::Truncated,
                      "need 4 octets for the total length");
  }
  if (total >= kMaxHeaderLength) {
    throw HeaderError(HeaderErrorKind::OversizedHeader,
                      "header of " + std::to_string(total) +
                          " octets predicted; refusing");
  }
  if (total > r.remaining()) {
    throw HeaderError(HeaderErrorKind::Truncated,
                      "total length " + std::to_string(total) + " declared, " +
                          std::to_string(r.remaining()) + " octets available");
  }

  TcprosHeader header;
  size_t consumed = 0;
  while (consumed < total) {
    if (total - consumed < 4) {
      throw HeaderError(HeaderErrorKind::Truncated,
                        "dangling octets inside the header");
    }
    uint32_t field_len = r.u32le();
    consumed += 4;
    if (field_len > total - consumed) {
      throw HeaderError(HeaderErrorKind::Truncated,
                        "field length " + std::to_string(field_len) +
                            " overruns the declared total");
    }
    Bytes raw = r.take(field_len);
    consumed += field_len;
    auto eq = std::find(raw.begin(), raw.end(), static_cast<uint8_t>('='));
    if (eq == raw.end()) {
      throw HeaderError(HeaderErrorKind::MissingEquals,
                        "field without '=': " + std::string(raw.begin(), raw.end()));
    }
    header.fields.emplace_back(std::string(raw.begin(), eq),
                               std::string(eq + 1, raw.end()));
  }
  return header;
}

bool looks_like_tcpros(std::span<const uint8_t> payload_prefix) {
  if (payload_prefix.size() < 4) return false;
  ByteReader r(payload_prefix);
  uint32_t total = r.u32le();
  if (total == 0 || total >= kMaxHeaderLength) return false;
  if (r.remaining() == 0) return true;  // nothing further to disprove it
  if (r.remaining() < 4) return false;  // a field prefix must follow
  uint32_t field_len = r.u32le();
  if (field_len == 0 || field_len + 4 > total) return false;
  size_t available = std::min<size_t>(field_len, r.remaining());
  Bytes head = r.take(available);
  bool complete = available == field_len;
  bool has_equals =
      std::find(head.begin(), head.end(), static_cast<uint8_t>('=')) != head.end();
  if (complete && !has_equals) return false;
  return true;
}

}  // namespace roswire::tcpros
