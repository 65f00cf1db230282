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

#include "roswire/bytes.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace roswire {

std::string to_hex(std::span<const uint8_t> data) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0F]);
  }
  return out;
}

static int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::optional<Bytes> from_hex(std::string_view text) {
  Bytes out;
  int hi = -1;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int n = hex_nibble(c);
    if (n < 0) return std::nullopt;
    if (hi < 0) {
      hi = n;
    } else {
      out.push_back(static_cast<uint8_t>((hi << 4) | n));
      hi = -1;
    }
  }
  if (hi >= 0) return std::nullopt;  // odd digit count
  return out;
}

std::string hexdump(std::span<const uint8_t> data) {
  std::string out;
  char line[16];
  for (size_t off = 0; off < data.size(); off += 16) {
    std::snprintf(line, sizeof line, "%04zx  ", off);
    out += line;
    size_t n = std::min<size_t>(16, data.size() - off);
    for (size_t i = 0; i < 16; ++i) {
      if (i < n) {
        std::snprintf(line, sizeof line, "%02X ", data[off + i]);
        out += line;
      } else {
        out += "   ";
      }
    }
    out += ' ';
    for (size_t i = 0; i < n; ++i) {
      uint8_t b = data[off + i];
      out.push_back(b >= 0x20 && b < 0x7F ? static_cast<char>(b) : '.');
    }
    out.push_back('\n');
  }
  return out;
}

std::optional<uint32_t> parse_ipv4(std::string_view dotted) {
  uint32_t addr = 0;
  int parts = 0;
  const char* p = dotted.data();
  const char* end = p + dotted.size();
  while (p < end) {
    unsigned v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{} || next == p || v > 255) return std::nullopt;
    addr = (addr << 8) | v;
    ++parts;
    p = next;
    if (parts < 4) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
  }
  if (parts != 4) return std::nullopt;
  return addr;
}

std::string format_ipv4(uint32_t addr) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", (addr >> 24) & 0xFF,
                (addr >> 16) & 0xFF, (addr >> 8) & 0xFF, addr & 0xFF);
  return buf;
}

void ByteReader::need(size_t n) const {
  if (remaining() < n) {
    throw TruncatedInput("need " + std::to_string(n) + " bytes, have " +
                         std::to_string(remaining()));
  }
}

uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

uint16_t ByteReader::u16le() {
  need(2);
  uint16_t v = static_cast<uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

uint16_t ByteReader::u16be() {
  need(2);
  uint16_t v = static_cast<uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
  pos_ += 2;
  return v;
}

uint32_t ByteReader::u32le() {
  need(4);
  uint32_t v = static_cast<uint32_t>(data_[pos_]) |
               (static_cast<uint32_t>(data_[pos_ + 1]) << 8) |
               (static_cast<uint32_t>(data_[pos_ + 2]) << 16) |
               (static_cast<uint32_t>(data_[pos_ + 3]) << 24);
  pos_ += 4;
  return v;
}

uint32_t ByteReader::u32be() {
  need(4);
  uint32_t v = (static_cast<uint32_t>(data_[pos_]) << 24) |
               (static_cast<uint32_t>(data_[pos_ + 1]) << 16) |
               (static_cast<uint32_t>(data_[pos_ + 2]) << 8) |
               static_cast<uint32_t>(data_[pos_ + 3]);
  pos_ += 4;
  return v;
}

Bytes ByteReader::take(size_t n) {
  need(n);
  Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
  pos_ += n;
  return out;
}

void ByteReader::skip(size_t n) {
  need(n);
  pos_ += n;
}

std::span<const uint8_t> ByteReader::peek(size_t n) const {
  need(n);
  return data_.subspan(pos_, n);
}

void ByteWriter::u16le(uint16_t v) {
  out_.push_back(static_cast<uint8_t>(v & 0xFF));
  out_.push_back(static_cast<uint8_t>(v >> 8));
}

void ByteWriter::u16be(uint16_t v) {
  out_.push_back(static_cast<uint8_t>(v >> 8));
  out_.push_back(static_cast<uint8_t>(v & 0xFF));
}

void ByteWriter::u32le(uint32_t v) {
  out_.push_back(static_cast<uint8_t>(v & 0xFF));
  out_.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
  out_.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
  out_.push_back(static_cast<uint8_t>(v >> 24));
}

void ByteWriter::u32be(uint32_t v) {
  out_.push_back(static_cast<uint8_t>(v >> 24));
  out_.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
  out_.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
  out_.push_back(static_cast<uint8_t>(v & 0xFF));
}

void ByteWriter::raw(std::span<const uint8_t> bytes) {
  out_.insert(out_.end(), bytes.begin(), bytes.end());
}

void ByteWriter::raw(std::string_view text) {
  out_.insert(out_.end(), text.begin(), text.end());
}

}  // namespace roswire
