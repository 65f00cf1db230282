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
#include <string_view>
#include <vector>

#include "roswire/error.hpp"

namespace roswire {

using Bytes = std::vector<uint8_t>;

/// Thrown by ByteReader when a read runs past the end of the buffer.
/// Parsers translate this into their own error vocabulary.
class TruncatedInput : public Error {
public:
  using Error::Error;
};

std::string to_hex(std::span<const uint8_t> data);

/// Accepts upper/lower case and ignores whitespace; rejects odd digit counts
/// and non-hex characters.
std::optional<Bytes> from_hex(std::string_view text);

/// Classic offset / 16 columns / ASCII gutter dump.
std::string hexdump(std::span<const uint8_t> data);

/// Dotted-quad helpers. The uint32 form is host order.
std::optional<uint32_t> parse_ipv4(std::string_view dotted);
std::string format_ipv4(uint32_t addr);

class ByteReader {
public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  size_t remaining() const { return data_.size() - pos_; }
  size_t position() const { return pos_; }
  bool empty() const { return remaining() == 0; }

  uint8_t u8();
  uint16_t u16le();
  uint16_t u16be();
  uint32_t u32le();
  uint32_t u32be();
  uint16_t u16(bool little) { return little ? u16le() : u16be(); }
  uint32_t u32(bool little) { return little ? u32le() : u32be(); }
  Bytes take(size_t n);
  void skip(size_t n);
  std::span<const uint8_t> peek(size_t n) const;

private:
  void need(size_t n) const;
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

class ByteWriter {
public:
  void u8(uint8_t v) { out_.push_back(v); }
  void u16le(uint16_t v);
  void u16be(uint16_t v);
  void u32le(uint32_t v);
  void u32be(uint32_t v);
  void u16(uint16_t v, bool little) { little ? u16le(v) : u16be(v); }
  void u32(uint32_t v, bool little) { little ? u32le(v) : u32be(v); }
  void raw(std::span<const uint8_t> bytes);
  void raw(std::string_view text);

  size_t size() const { return out_.size(); }
  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

private:
  Bytes out_;
};

}  // namespace roswire
