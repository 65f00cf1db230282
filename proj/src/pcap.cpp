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

#include "roswire/pcap.hpp"

#include <cstdio>
#include <memory>

namespace roswire::pcap {

namespace {

constexpr uint32_t kMagicUsec = 0xA1B2C3D4;
constexpr uint32_t kLinkTypeEthernet = 1;
constexpr size_t kEthernetHeader = 14;

// Synthetic locally-administered MACs; pcap consumers only need them present.
constexpr uint8_t kSrcMac[6] = {0x02, 0x00, 0x00, 0x00, 0x00, 0x01};
constexpr uint8_t kDstMac[6] = {0x02, 0x00, 0x00, 0x00, 0x00, 0x02};

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_ethernet(ByteWriter& w) {
  w.raw(std::span<const uint8_t>(kDstMac, 6));
  w.raw(std::span<const uint8_t>(kSrcMac, 6));
  w.u16be(0x0800);
}

void write_ipv4(ByteWriter& w, uint8_t protocol, uint16_t total_length,
                uint16_t ip_id, uint8_t ttl, uint32_t src, uint32_t dst) {
  ByteWriter h;
  h.u8(0x45);            // version 4, ihl 5
  h.u8(0);               // tos
  h.u16be(total_length);
  h.u16be(ip_id);
  h.u16be(0x4000);       // DF, fragment offset 0
  h.u8(ttl);
  h.u8(protocol);
  h.u16be(0);            // checksum placeholder
  h.u32be(src);
  h.u32be(dst);
  Bytes header = h.take();
  uint16_t sum = inet_checksum(header);
  header[10] = static_cast<uint8_t>(sum >> 8);
  header[11] = static_cast<uint8_t>(sum & 0xFF);
  w.raw(std::span<const uint8_t>(header));
}

uint16_t l4_checksum(uint8_t protocol, uint32_t src, uint32_t dst,
                     std::span<const uint8_t> segment) {
  ByteWriter pseudo;
  pseudo.u32be(src);
  pseudo.u32be(dst);
  pseudo.u8(0);
  pseudo.u8(protocol);
  pseudo.u16be(static_cast<uint16_t>(segment.size()));
  pseudo.raw(segment);
  return inet_checksum(pseudo.bytes());
}

}  // namespace

uint16_t inet_checksum(std::span<const uint8_t> data) {
  uint32_t sum = 0;
  size_t i = 0;
  for (; i + 1 < data.size(); i += 2) {
    sum += static_cast<uint32_t>((data[i] << 8) | data[i + 1]);
  }
  if (i < data.size()) sum += static_cast<uint32_t>(data[i] << 8);
  while (sum >> 16) sum = (sum & 0xFFFF) + (sum >> 16);
  return static_cast<uint16_t>(~sum & 0xFFFF);
}

void write_pcap_frames(const std::string& path, const std::vector<Frame>& frames) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw PcapError(PcapErrorKind::IoError, "cannot open " + path);
  ByteWriter w;
  w.u32le(kMagicUsec);
  w.u16le(2);   // major
  w.u16le(4);   // minor
  w.u32le(0);   // thiszone
  w.u32le(0);   // sigfigs
  w.u32le(65535);
  w.u32le(kLinkTypeEthernet);
  for (const Frame& frame : frames) {
    w.u32le(frame.ts_sec);
    w.u32le(frame.ts_usec);
    w.u32le(static_cast<uint32_t>(frame.data.size()));
    w.u32le(static_cast<uint32_t>(frame.data.size()));
    w.raw(std::span<const uint8_t>(frame.data));
  }
  const Bytes& out = w.bytes();
  if (std::fwrite(out.data(), 1, out.size(), f.get()) != out.size()) {
    throw PcapError(PcapErrorKind::IoError, "short write to " + path);
  }
}

std::vector<Frame> read_pcap_frames(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw PcapError(PcapErrorKind::IoError, "cannot open " + path);
  Bytes data;
  uint8_t buf[65536];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f.get())) > 0) {
    data.insert(data.end(), buf, buf + n);
  }
  if (data.size() < 24) {
    throw PcapError(PcapErrorKind::NotAPcap,
                    path + ": too short for a pcap global header");
  }
  ByteReader r(data);
  uint32_t magic = r.u32le();
  bool swapped;
  if (magic == kMagicUsec) {
    swapped = false;
  } else if (magic == 0xD4C3B2A1) {
    swapped = true;
  } else {
    throw PcapError(PcapErrorKind::NotAPcap, path + ": bad magic");
  }
  auto rd16 = [&] { return swapped ? r.u16be() : r.u16le(); };
  auto rd32 = [&] { return swapped ? r.u32be() : r.u32le(); };
  rd16();  // major
  rd16();  // minor
  rd32();  // thiszone
  rd32();  // sigfigs
  rd32();  // snaplen
  rd32();  // linktype (anything parses; non-ethernet frames just won't decode)

  std::vector<Frame> frames;
  while (r.remaining() >= 16) {
    Frame frame;
    frame.ts_sec = rd32();
    frame.ts_usec = rd32();
    uint32_t incl = rd32();
    rd32();  // orig_len
    if (incl > r.remaining()) {
      throw PcapError(PcapErrorKind::NotAPcap, path + ": truncated record");
    }
    frame.data = r.take(incl);
    frames.push_back(std::move(frame));
  }
  return frames;
}

Bytes build_tcp_frame(const TcpFields& f) {
  ByteWriter w;
  write_ethernet(w);
  Bytes ip_payload;
  {
    ByteWriter t;
    t.u16be(f.src_port);
    t.u16be(f.dst_port);
    t.u32be(f.seq);
    t.u32be(f.ack);
    t.u8(0x50);  // data offset 5, no options
    t.u8(f.flags);
    t.u16be(8192);  // window
    t.u16be(0);     // checksum placeholder
    t.u16be(0);     // urgent
    t.raw(std::span<const uint8_t>(f.payload));
    ip_payload = t.take();
    uint16_t sum = l4_checksum(6, f.src_ip, f.dst_ip, ip_payload);
    ip_payload[16] = static_cast<uint8_t>(sum >> 8);
    ip_payload[17] = static_cast<uint8_t>(sum & 0xFF);
  }
  write_ipv4(w, 6, static_cast<uint16_t>(20 + ip_payload.size()), f.ip_id,
             f.ttl, f.src_ip, f.dst_ip);
  w.raw(std::span<const uint8_t>(ip_payload));
  return w.take();
}

Bytes build_udp_frame(const UdpFields& f) {
  ByteWriter w;
  write_ethernet(w);
  Bytes ip_payload;
  {
    ByteWriter u;
    u.u16be(f.src_port);
    u.u16be(f.dst_port);
    u.u16be(static_cast<uint16_t>(8 + f.payload.size()));
    u.u16be(0);  // checksum placeholder
    u.raw(std::span<const uint8_t>(f.payload));
    ip_payload = u.take();
    uint16_t sum = l4_checksum(17, f.src_ip, f.dst_ip, ip_payload);
    if (sum == 0) sum = 0xFFFF;
    ip_payload[6] = static_cast<uint8_t>(sum >> 8);
    ip_payload[7] = static_cast<uint8_t>(sum & 0xFF);
  }
  write_ipv4(w, 17, static_cast<uint16_t>(20 + ip_payload.size()), f.ip_id,
             f.ttl, f.src_ip, f.dst_ip);
  w.raw(std::span<const uint8_t>(ip_payload));
  return w.take();
}

Bytes build_tcp_packet(const TcpFields& f) {
  Bytes frame = build_tcp_frame(f);
  return Bytes(frame.begin() + kEthernetHeader, frame.end());
}

namespace {

struct Ipv4Info {
  uint8_t protocol = 0;
  uint32_t src = 0, dst = 0;
  uint16_t ip_id = 0;
  uint8_t ttl = 0;
  size_t l4_offset = 0;
  size_t l4_length = 0;
};

std::optional<Ipv4Info> parse_ipv4_header(std::span<const uint8_t> frame) {
  if (frame.size() < kEthernetHeader + 20) return std::nullopt;
  uint16_t ethertype = static_cast<uint16_t>((frame[12] << 8) | frame[13]);
  if (ethertype != 0x0800) return std::nullopt;
  std::span<const uint8_t> ip = frame.subspan(kEthernetHeader);
  if ((ip[0] >> 4) != 4) return std::nullopt;
  size_t ihl = static_cast<size_t>(ip[0] & 0x0F) * 4;
  if (ihl < 20 || ip.size() < ihl) return std::nullopt;
  Ipv4Info info;
  uint16_t total = static_cast<uint16_t>((ip[2] << 8) | ip[3]);
  if (total < ihl || total > ip.size()) return std::nullopt;
  info.ip_id = static_cast<uint16_t>((ip[4] << 8) | ip[5]);
  info.ttl = ip[8];
  info.protocol = ip[9];
  info.src = (static_cast<uint32_t>(ip[12]) << 24) | (ip[13] << 16) |
             (ip[14] << 8) | ip[15];
  info.dst = (static_cast<uint32_t>(ip[16]) << 24) | (ip[17] << 16) |
             (ip[18] << 8) | ip[19];
  info.l4_offset = kEthernetHeader + ihl;
  info.l4_length = total - ihl;
  return info;
}

}  // namespace

std::optional<TcpFields> parse_tcp_frame(std::span<const uint8_t> frame) {
  auto ip = parse_ipv4_header(frame);
  if (!ip || ip->protocol != 6) return std::nullopt;
  if (ip->l4_length < 20) return std::nullopt;
  std::span<const uint8_t> tcp = frame.subspan(ip->l4_offset, ip->l4_length);
  size_t data_offset = static_cast<size_t>(tcp[12] >> 4) * 4;
  if (data_offset < 20 || data_offset > tcp.size()) return std::nullopt;
  TcpFields f;
  f.src_ip = ip->src;
  f.dst_ip = ip->dst;
  f.ip_id = ip->ip_id;
  f.ttl = ip->ttl;
  f.src_port = static_cast<uint16_t>((tcp[0] << 8) | tcp[1]);
  f.dst_port = static_cast<uint16_t>((tcp[2] << 8) | tcp[3]);
  f.seq = (static_cast<uint32_t>(tcp[4]) << 24) | (tcp[5] << 16) |
          (tcp[6] << 8) | tcp[7];
  f.ack = (static_cast<uint32_t>(tcp[8]) << 24) | (tcp[9] << 16) |
          (tcp[10] << 8) | tcp[11];
  f.flags = tcp[13];
  f.payload.assign(tcp.begin() + data_offset, tcp.end());
  return f;
}

std::optional<UdpFields> parse_udp_frame(std::span<const uint8_t> frame) {
  auto ip = parse_ipv4_header(frame);
  if (!ip || ip->protocol != 17) return std::nullopt;
  if (ip->l4_length < 8) return std::nullopt;
  std::span<const uint8_t> udp = frame.subspan(ip->l4_offset, ip->l4_length);
  UdpFields f;
  f.src_ip = ip->src;
  f.dst_ip = ip->dst;
  f.ip_id = ip->ip_id;
  f.ttl = ip->ttl;
  f.src_port = static_cast<uint16_t>((udp[0] << 8) | udp[1]);
  f.dst_port = static_cast<uint16_t>((udp[2] << 8) | udp[3]);
  uint16_t udp_len = static_cast<uint16_t>((udp[4] << 8) | udp[5]);
  if (udp_len < 8 || udp_len > udp.size()) return std::nullopt;
  f.payload.assign(udp.begin() + 8, udp.begin() + udp_len);
  return f;
}

}  // namespace roswire::pcap
