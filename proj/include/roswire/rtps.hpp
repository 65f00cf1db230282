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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "roswire/bytes.hpp"
#include "roswire/error.hpp"

// Bit-exact model of RTPS messages as exchanged during DDS participant
// discovery: the fixed 20-octet header plus DATA submessages carrying an
// SPDP parameter list. Non-DATA submessages are kept as opaque byte blobs.
// Everything here works on byte buffers only; sockets live elsewhere.
namespace roswire::rtps {

struct ProtocolVersion {
  uint8_t major = 2;
  uint8_t minor = 4;
  bool operator==(const ProtocolVersion&) const = default;
};

struct VendorId {
  std::array<uint8_t, 2> id{0x01, 0x03};
  uint16_t value() const { return static_cast<uint16_t>((id[0] << 8) | id[1]); }
  static VendorId from_value(uint16_t v) {
    return VendorId{{static_cast<uint8_t>(v >> 8), static_cast<uint8_t>(v & 0xFF)}};
  }
  bool operator==(const VendorId&) const = default;
};

/// Display name for well-known vendor ids; absent for anything unknown.
std::optional<std::string_view> vendor_name(const VendorId& vendor);
std::span<const std::pair<uint16_t, std::string_view>> vendor_table();

/// 12 octets on the wire, each field written big-endian.
struct GuidPrefix {
  uint32_t host_id = 0;
  uint32_t app_id = 0;
  uint32_t instance_id = 0;
  std::array<uint8_t, 12> octets() const;
  bool operator==(const GuidPrefix&) const = default;
};

// Locator kind value as the PoC dissector prints UDPv4; stored and emitted
// verbatim (whether it is a display artifact of that dissector or the on-wire
// convention is deliberately not second-guessed here).
inline constexpr uint32_t kLocatorKindUdpV4 = 16777216;

/// 24 octets on the wire: kind, port, 16-octet address (IPv4 in the last 4).
struct Locator {
  uint32_t kind = kLocatorKindUdpV4;
  uint32_t port = 0;
  std::array<uint8_t, 16> address{};

  static Locator udp_v4(std::string_view dotted, uint32_t port,
                        uint32_t kind = kLocatorKindUdpV4);
  std::string address_text() const;
  bool operator==(const Locator&) const = default;
};

namespace pid {
inline constexpr uint16_t kPad = 0;
inline constexpr uint16_t kSentinel = 1;
inline constexpr uint16_t kDomainId = 15;
inline constexpr uint16_t kProtocolVersion = 21;
inline constexpr uint16_t kVendorId = 22;
inline constexpr uint16_t kDefaultUnicastLocator = 49;
inline constexpr uint16_t kMetatrafficUnicastLocator = 50;
inline constexpr uint16_t kMetatrafficMulticastLocator = 51;
inline constexpr uint16_t kManualLivelinessCount = 52;
inline constexpr uint16_t kParticipantBuiltinEndpoints = 68;
inline constexpr uint16_t kDefaultMulticastLocator = 72;
inline constexpr uint16_t kParticipantGuid = 80;
inline constexpr uint16_t kBuiltinEndpointSet = 88;
inline constexpr uint16_t kBuiltinEndpointQos = 119;
}  // namespace pid

std::string_view pid_name(uint16_t pid);  // "PID_UNKNOWN" when unmapped

struct DomainIdBody {
  uint32_t domain_id = 0;
  bool operator==(const DomainIdBody&) const = default;
};
struct ProtocolVersionBody {
  ProtocolVersion version;
  std::array<uint8_t, 2> padding{};
  bool operator==(const ProtocolVersionBody&) const = default;
};
struct ParticipantGuidBody {
  std::array<uint8_t, 16> guid{};
  bool operator==(const ParticipantGuidBody&) const = default;
};
struct VendorIdBody {
  VendorId vendor;
  std::array<uint8_t, 2> padding{};
  bool operator==(const VendorIdBody&) const = default;
};
struct BuiltinEndpointSetBody {
  std::array<uint8_t, 4> bits{};
  bool operator==(const BuiltinEndpointSetBody&) const = default;
};
struct ParticipantBuiltinEndpointsBody {
  std::array<uint8_t, 4> bits{};
  bool operator==(const ParticipantBuiltinEndpointsBody&) const = default;
};
struct LocatorBody {
  Locator locator;
  bool operator==(const LocatorBody&) const = default;
};
struct LivelinessCountBody {
  std::array<uint8_t, 4> count{};
  bool operator==(const LivelinessCountBody&) const = default;
};
struct EndpointQosBody {
  std::array<uint8_t, 4> value{};
  bool operator==(const EndpointQosBody&) const = default;
};
struct UnknownBody {
  Bytes raw;
  bool operator==(const UnknownBody&) const = default;
};

using ParameterBody =
    std::variant<DomainIdBody, ProtocolVersionBody, ParticipantGuidBody,
                 VendorIdBody, BuiltinEndpointSetBody,
                 ParticipantBuiltinEndpointsBody, LocatorBody,
                 LivelinessCountBody, EndpointQosBody, UnknownBody>;

/// One SPDP parameter-list entry. declared_length is what the 4-octet entry
/// header claims; serialization always emits the actual body octets, so the
/// two may deliberately diverge for crafted packets (corrupt_parameter_length
/// exploits exactly that divergence).
struct Parameter {
  uint16_t pid = 0;
  uint16_t declared_length = 0;
  ParameterBody body = UnknownBody{};

  size_t body_length() const;
  Bytes body_bytes(bool little_endian) const;

  /// Builds an entry whose declared length matches the body.
  static Parameter make(uint16_t pid, ParameterBody body);

  bool operator==(const Parameter&) const = default;
};

struct DataPayload {
  uint16_t encapsulation_kind = 3;  // identifier octets 00 03 on the wire
  uint16_t encapsulation_options = 0;
  std::vector<Parameter> parameters;
  bool trailing_sentinel = false;  // emit / saw PID_SENTINEL at the end
  bool operator==(const DataPayload&) const = default;
};

inline constexpr uint8_t kDataSubmessageId = 21;

struct DataSubmessage {
  uint8_t flags = 5;  // bit 0 set = little-endian multi-octet fields
  uint16_t octets_to_next_header = 0;  // emitted verbatim; 0 = runs to end
  uint16_t extra_flags = 0;
  uint16_t octets_to_inline_qos = 16;
  uint32_t reader_entity_key = 0;  // 24-bit, 3 octets on the wire
  uint8_t reader_entity_kind = 0;
  uint32_t writer_entity_key = 256;
  uint8_t writer_entity_kind = 194;
  int32_t writer_seq_hi = 0;
  uint32_t writer_seq_low = 1;
  DataPayload payload;

  bool little_endian() const { return (flags & 0x01) != 0; }
  bool operator==(const DataSubmessage&) const = default;
};

/// Any submessage kind this toolkit does not model (INFO_TS, HEARTBEAT, ...)
/// is carried through untouched so messages re-serialize byte-identically.
struct OpaqueSubmessage {
  uint8_t id = 0;
  uint8_t flags = 0;
  uint16_t octets_to_next_header = 0;
  Bytes body;
  bool little_endian() const { return (flags & 0x01) != 0; }
  bool operator==(const OpaqueSubmessage&) const = default;
};

using Submessage = std::variant<DataSubmessage, OpaqueSubmessage>;

inline constexpr std::array<uint8_t, 4> kRtpsMagic{'R', 'T', 'P', 'S'};

struct RtpsMessage {
  ProtocolVersion version;
  VendorId vendor;
  GuidPrefix guid_prefix;
  std::vector<Submessage> submessages;
  bool operator==(const RtpsMessage&) const = default;
};

enum class ParseMode { Strict, Lenient };

enum class WireErrorKind { BadMagic, Truncated, LengthMismatch, PidNotFound };

class WireError : public Error {
public:
  WireError(WireErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  WireErrorKind kind() const { return kind_; }

private:
  WireErrorKind kind_;
};

struct Parsed {
  RtpsMessage message;
  std::vector<std::string> diagnostics;  // populated in lenient mode
};

/// Strict mode throws WireError on the first structural problem; lenient mode
/// keeps what it can and records one diagnostic per problem. Both reject a
/// wrong magic; lenient still needs the full 20-octet header to say anything.
Parsed parse_message(std::span<const uint8_t> bytes, ParseMode mode);

Bytes serialize_message(const RtpsMessage& msg);

RtpsMessage build_header_only(ProtocolVersion version, VendorId vendor,
                              GuidPrefix prefix);

/// Knobs for build_spdp_data. Defaults reproduce the crafted-discovery
/// constants used throughout the ROS 2 PoCs (deterministic by design so
/// byte-exact tests are possible); randomize the GUID for stealthier probes.
struct SpdpConfig {
  ProtocolVersion version{2, 4};
  VendorId vendor{{0x01, 0x03}};
  GuidPrefix guid_prefix{16974402u, 2886795267u, 10045242u};
  uint32_t domain_id = 0;
  // When unset, derived from guid_prefix plus the participant entity id.
  std::optional<std::array<uint8_t, 16>> participant_guid;
  Locator metatraffic_unicast = Locator::udp_v4("127.0.0.1", 12345);
  Locator metatraffic_multicast = Locator::udp_v4("239.255.0.1", 17902);
  Locator default_unicast = Locator::udp_v4("127.0.0.1", 12345);
  Locator default_multicast = Locator::udp_v4("127.0.0.1", 12345);
  std::array<uint8_t, 4> builtin_endpoint_set{0x3F, 0xFC, 0x00, 0x00};
  std::array<uint8_t, 4> liveliness_count{};
  std::vector<Parameter> extra_params;
  bool trailing_sentinel = false;
};

/// Participant GUID = 12-octet prefix + this entity id.
inline constexpr std::array<uint8_t, 4> kParticipantEntityId{0x00, 0x00, 0x01, 0xC1};

std::array<uint8_t, 16> participant_guid_for(const GuidPrefix& prefix);

/// One DATA submessage carrying the SPDP parameter list in the fixed order
/// 119, 15, 21, 80, 22, 68, 88, 50, 51, 49, 72, 52, then extras.
RtpsMessage build_spdp_data(const SpdpConfig& cfg);

/// Rewrites the declared length of the first parameter with the given pid,
/// leaving the body octets alone. The result serializes but is intentionally
/// no longer strict-parseable. Throws WireError{PidNotFound}.
RtpsMessage corrupt_parameter_length(RtpsMessage msg, uint16_t pid,
                                     uint16_t new_length);

}  // namespace roswire::rtps
