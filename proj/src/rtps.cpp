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

#include "roswire/rtps.hpp"

#include <algorithm>
#include <utility>

namespace roswire::rtps {

namespace {

// Vendor ids assigned to DDS implementations (first octet 0x01) that show up
// during discovery. Kept short on purpose: fingerprinting beyond these falls
// back to the raw id.
constexpr std::pair<uint16_t, std::string_view> kVendors[] = {
    {0x0101, "Real-Time Innovations, Inc. (RTI) - Connext DDS"},
    {0x0102, "PrismTech Inc. - OpenSplice DDS"},
    {0x0103, "Object Computing Incorporated, Inc. (OCI) - OpenDDS"},
    {0x0104, "MilSoft"},
    {0x0105, "Gallium Visual Systems Inc. - InterCOM DDS"},
    {0x0106, "TwinOaks Computing, Inc. - CoreDX DDS"},
    {0x0107, "Lakota Technical Solutions, Inc."},
    {0x0108, "ICOUP Consulting"},
    {0x0109, "ETRI Electronics and Telecommunication Research Institute"},
    {0x010A, "Real-Time Innovations, Inc. (RTI) - Connext DDS Micro"},
    {0x010B, "PrismTech - OpenSplice Mobile"},
    {0x010C, "PrismTech - OpenSplice Gateway"},
    {0x010D, "PrismTech - OpenSplice Lite"},
    {0x010E, "Technicolor Inc. - Qeo"},
    {0x010F, "eProsima - Fast-RTPS / Fast DDS"},
    {0x0110, "Eclipse Foundation - Cyclone DDS"},
    {0x0111, "GurumNetworks Ltd. - GurumDDS"},
};

size_t fixed_body_length(uint16_t p) {
  switch (p) {
    case pid::kDomainId:
    case pid::kProtocolVersion:
    case pid::kVendorId:
    case pid::kManualLivelinessCount:
    case pid::kParticipantBuiltinEndpoints:
    case pid::kBuiltinEndpointSet:
    case pid::kBuiltinEndpointQos:
      return 4;
    case pid::kParticipantGuid:
      return 16;
    case pid::kDefaultUnicastLocator:
    case pid::kMetatrafficUnicastLocator:
    case pid::kMetatrafficMulticastLocator:
    case pid::kDefaultMulticastLocator:
      return 24;
    default:
      return 0;  // variable / unknown
  }
}

bool has_typed_body(uint16_t p) { return fixed_body_length(p) != 0; }

}  // namespace

std::optional<std::string_view> vendor_name(const VendorId& vendor) {
  for (const auto& [value, name] : kVendors) {
    if (value == vendor.value()) return name;
  }
  return std::nullopt;
}

std::span<const std::pair<uint16_t, std::string_view>> vendor_table() {
  return kVendors;
}

std::string_view pid_name(uint16_t p) {
  switch (p) {
    case pid::kPad: return "PID_PAD";
    case pid::kSentinel: return "PID_SENTINEL";
    case pid::kDomainId: return "PID_DOMAIN_ID";
    case pid::kProtocolVersion: return "PID_PROTOCOL_VERSION";
    case pid::kVendorId: return "PID_VENDOR_ID";
    case pid::kDefaultUnicastLocator: return "PID_DEFAULT_UNICAST_LOCATOR";
    case pid::kMetatrafficUnicastLocator: return "PID_METATRAFFIC_UNICAST_LOCATOR";
    case pid::kMetatrafficMulticastLocator: return "PID_METATRAFFIC_MULTICAST_LOCATOR";
    case pid::kManualLivelinessCount: return "PID_PARTICIPANT_MANUAL_LIVELINESS_COUNT";
    case pid::kParticipantBuiltinEndpoints: return "PID_PARTICIPANT_BUILTIN_ENDPOINTS";
    case pid::kDefaultMulticastLocator: return "PID_DEFAULT_MULTICAST_LOCATOR";
    case pid::kParticipantGuid: return "PID_PARTICIPANT_GUID";
    case pid::kBuiltinEndpointSet: return "PID_BUILTIN_ENDPOINT_SET";
    case pid::kBuiltinEndpointQos: return "PID_BUILTIN_ENDPOINT_QOS";
    default: return "PID_UNKNOWN";
  }
}

std::array<uint8_t, 12> GuidPrefix::octets() const {
  std::array<uint8_t, 12> out{};
  ByteWriter w;
  w.u32be(host_id);
  w.u32be(app_id);
  w.u32be(instance_id);
  std::copy(w.bytes().begin(), w.bytes().end(), out.begin());
  return out;
}

Locator Locator::udp_v4(std::string_view dotted, uint32_t port, uint32_t kind) {
  Locator loc;
  loc.kind = kind;
  loc.port = port;
  auto addr = parse_ipv4(dotted);
  if (!addr) {
    throw WireError(WireErrorKind::Truncated,
                    "bad IPv4 literal: " + std::string(dotted));
  }
  loc.address[12] = static_cast<uint8_t>(*addr >> 24);
  loc.address[13] = static_cast<uint8_t>(*addr >> 16);
  loc.address[14] = static_cast<uint8_t>(*addr >> 8);
  loc.address[15] = static_cast<uint8_t>(*addr & 0xFF);
  return loc;
}

std::string Locator::address_text() const {
  uint32_t v = (static_cast<uint32_t>(address[12]) << 24) |
               (static_cast<uint32_t>(address[13]) << 16) |
               (static_cast<uint32_t>(address[14]) << 8) |
               static_cast<uint32_t>(address[15]);
  return format_ipv4(v);
}

std::array<uint8_t, 16> participant_guid_for(const GuidPrefix& prefix) {
  std::array<uint8_t, 16> out{};
  auto p = prefix.octets();
  std::copy(p.begin(), p.end(), out.begin());
  std::copy(kParticipantEntityId.begin(), kParticipantEntityId.end(),
            out.begin() + 12);
  return out;
}

size_t Parameter::body_length() const {
  return std::visit(
      [](const auto& b) -> size_t {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, UnknownBody>) {
          return b.raw.size();
        } else if constexpr (std::is_same_v<T, ParticipantGuidBody>) {
          return 16;
        } else if constexpr (std::is_same_v<T, LocatorBody>) {
          return 24;
        } else {
          return 4;
        }
      },
      body);
}

Bytes Parameter::body_bytes(bool little) const {
  ByteWriter w;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, DomainIdBody>) {
          w.u32(b.domain_id, little);
        } else if constexpr (std::is_same_v<T, ProtocolVersionBody>) {
          w.u8(b.version.major);
          w.u8(b.version.minor);
          w.raw(std::span<const uint8_t>(b.padding));
        } else if constexpr (std::is_same_v<T, ParticipantGuidBody>) {
          w.raw(std::span<const uint8_t>(b.guid));
        } else if constexpr (std::is_same_v<T, VendorIdBody>) {
          w.raw(std::span<const uint8_t>(b.vendor.id));
          w.raw(std::span<const uint8_t>(b.padding));
        } else if constexpr (std::is_same_v<T, BuiltinEndpointSetBody>) {
          w.raw(std::span<const uint8_t>(b.bits));
        } else if constexpr (std::is_same_v<T, ParticipantBuiltinEndpointsBody>) {
          w.raw(std::span<const uint8_t>(b.bits));
        } else if constexpr (std::is_same_v<T, LocatorBody>) {
          w.u32(b.locator.kind, little);
          w.u32(b.locator.port, little);
          w.raw(std::span<const uint8_t>(b.locator.address));
        } else if constexpr (std::is_same_v<T, LivelinessCountBody>) {
          w.raw(std::span<const uint8_t>(b.count));
        } else if constexpr (std::is_same_v<T, EndpointQosBody>) {
          w.raw(std::span<const uint8_t>(b.value));
        } else {
          w.raw(std::span<const uint8_t>(b.raw));
        }
      },
      body);
  return w.take();
}

Parameter Parameter::make(uint16_t p, ParameterBody body) {
  Parameter out;
  out.pid = p;
  out.body = std::move(body);
  out.declared_length = static_cast<uint16_t>(out.body_length());
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void write_entity_id(ByteWriter& w, uint32_t key, uint8_t kind) {
  w.u8(static_cast<uint8_t>((key >> 16) & 0xFF));
  w.u8(static_cast<uint8_t>((key >> 8) & 0xFF));
  w.u8(static_cast<uint8_t>(key & 0xFF));
  w.u8(kind);
}

void write_data_submessage(ByteWriter& w, const DataSubmessage& d) {
  const bool le = d.little_endian();
  w.u8(kDataSubmessageId);
  w.u8(d.flags);
  w.u16(d.octets_to_next_header, le);
  w.u16(d.extra_flags, le);
  w.u16(d.octets_to_inline_qos, le);
  write_entity_id(w, d.reader_entity_key, d.reader_entity_kind);
  write_entity_id(w, d.writer_entity_key, d.writer_entity_kind);
  w.u32(static_cast<uint32_t>(d.writer_seq_hi), le);
  w.u32(d.writer_seq_low, le);
  // Encapsulation identifier octets are a fixed-order scheme id.
  w.u16be(d.payload.encapsulation_kind);
  w.u16be(d.payload.encapsulation_options);
  for (const Parameter& p : d.payload.parameters) {
    w.u16(p.pid, le);
    w.u16(p.declared_length, le);  // header claims the declared value...
    w.raw(p.body_bytes(le));       // ...the body octets go out as they are
  }
  if (d.payload.trailing_sentinel) {
    w.u16(pid::kSentinel, le);
    w.u16(0, le);
  }
}

}  // namespace

Bytes serialize_message(const RtpsMessage& msg) {
  ByteWriter w;
  w.raw(std::span<const uint8_t>(kRtpsMagic));
  w.u8(msg.version.major);
  w.u8(msg.version.minor);
  w.raw(std::span<const uint8_t>(msg.vendor.id));
  auto prefix = msg.guid_prefix.octets();
  w.raw(std::span<const uint8_t>(prefix));
  for (const Submessage& sub : msg.submessages) {
    if (const auto* data = std::get_if<DataSubmessage>(&sub)) {
      write_data_submessage(w, *data);
    } else {
      const auto& op = std::get<OpaqueSubmessage>(sub);
      w.u8(op.id);
      w.u8(op.flags);
      w.u16(op.octets_to_next_header, op.little_endian());
      w.raw(std::span<const uint8_t>(op.body));
    }
  }
  return w.take();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Problems {
public:
  Problems(ParseMode mode, std::vector<std::string>& diags)
      : mode_(mode), diags_(diags) {}

  // Records in lenient mode, throws in strict mode.
  void report(WireErrorKind kind, const std::string& what) {
    if (mode_ == ParseMode::Strict) throw WireError(kind, what);
    diags_.push_back(what);
  }

private:
  ParseMode mode_;
  std::vector<std::string>& diags_;
};

ParameterBody decode_typed_body(uint16_t p, std::span<const uint8_t> raw,
                                bool le) {
  ByteReader r(raw);
  switch (p) {
    case pid::kDomainId:
      return DomainIdBody{r.u32(le)};
    case pid::kProtocolVersion: {
      ProtocolVersionBody b;
      b.version.major = r.u8();
      b.version.minor = r.u8();
      b.padding[0] = r.u8();
      b.padding[1] = r.u8();
      return b;
    }
    case pid::kParticipantGuid: {
      ParticipantGuidBody b;
      Bytes g = r.take(16);
      std::copy(g.begin(), g.end(), b.guid.begin());
      return b;
    }
    case pid::kVendorId: {
      VendorIdBody b;
      b.vendor.id[0] = r.u8();
      b.vendor.id[1] = r.u8();
      b.padding[0] = r.u8();
      b.padding[1] = r.u8();
      return b;
    }
    case pid::kBuiltinEndpointSet: {
      BuiltinEndpointSetBody b;
      Bytes g = r.take(4);
      std::copy(g.begin(), g.end(), b.bits.begin());
      return b;
    }
    case pid::kParticipantBuiltinEndpoints: {
      ParticipantBuiltinEndpointsBody b;
      Bytes g = r.take(4);
      std::copy(g.begin(), g.end(), b.bits.begin());
      return b;
    }
    case pid::kDefaultUnicastLocator:
    case pid::kMetatrafficUnicastLocator:
    case pid::kMetatrafficMulticastLocator:
    case pid::kDefaultMulticastLocator: {
      LocatorBody b;
      b.locator.kind = r.u32(le);
      b.locator.port = r.u32(le);
      Bytes g = r.take(16);
      std::copy(g.begin(), g.end(), b.locator.address.begin());
      return b;
    }
    case pid::kManualLivelinessCount: {
      LivelinessCountBody b;
      Bytes g = r.take(4);
      std::copy(g.begin(), g.end(), b.count.begin());
      return b;
    }
    case pid::kBuiltinEndpointQos: {
      EndpointQosBody b;
      Bytes g = r.take(4);
      std::copy(g.begin(), g.end(), b.value.begin());
      return b;
    }
    default:
      return UnknownBody{Bytes(raw.begin(), raw.end())};
  }
}

void parse_parameter_list(ByteReader& r, DataPayload& payload, bool le,
                          Problems& problems) {
  while (r.remaining() >= 4) {
    uint16_t p = r.u16(le);
    uint16_t len = r.u16(le);
    if (p == pid::kSentinel) {
      payload.trailing_sentinel = true;
      if (len != 0) {
        problems.report(WireErrorKind::LengthMismatch,
                        "sentinel parameter declares nonzero length");
      }
      if (r.remaining() > 0) {
        // Nothing should follow the sentinel inside this payload.
        problems.report(WireErrorKind::LengthMismatch,
                        std::to_string(r.remaining()) +
                            " stray octet(s) after PID_SENTINEL");
        r.skip(r.remaining());
      }
      return;
    }
    if (len % 4 != 0) {
      problems.report(WireErrorKind::LengthMismatch,
                      "parameter " + std::to_string(p) + " length " +
                          std::to_string(len) + " is not a multiple of 4");
    }
    if (len > r.remaining()) {
      problems.report(WireErrorKind::Truncated,
                      "parameter " + std::to_string(p) + " declares " +
                          std::to_string(len) + " octets, only " +
                          std::to_string(r.remaining()) + " left");
      Parameter out;
      out.pid = p;
      out.declared_length = len;
      out.body = UnknownBody{r.take(r.remaining())};
      payload.parameters.push_back(std::move(out));
      return;
    }
    Bytes raw = r.take(len);
    Parameter out;
    out.pid = p;
    out.declared_length = len;
    size_t expected = fixed_body_length(p);
    if (has_typed_body(p) && expected != len) {
      problems.report(WireErrorKind::LengthMismatch,
                      std::string(pid_name(p)) + " (" + std::to_string(p) +
                          ") declares length " + std::to_string(len) +
                          ", expected " + std::to_string(expected));
      out.body = UnknownBody{std::move(raw)};
    } else {
      out.body = decode_typed_body(p, raw, le);
    }
    payload.parameters.push_back(std::move(out));
  }
  if (r.remaining() > 0) {
    problems.report(WireErrorKind::Truncated,
                    "dangling " + std::to_string(r.remaining()) +
                        " octet(s) at end of parameter list");
    r.skip(r.remaining());
  }
}

// Returns the submessage, or nullopt when the body cannot even be framed
// (the caller then falls back to an opaque carrier).
std::optional<DataSubmessage> parse_data_body(std::span<const uint8_t> body,
                                              uint8_t flags, uint16_t o2nh,
                                              Problems& problems) {
  if (body.size() < 24) {
    problems.report(WireErrorKind::Truncated,
                    "DATA submessage body too short: " +
                        std::to_string(body.size()) + " octets");
    return std::nullopt;
  }
  DataSubmessage d;
  d.flags = flags;
  d.octets_to_next_header = o2nh;
  const bool le = d.little_endian();
  ByteReader r(body);
  d.extra_flags = r.u16(le);
  d.octets_to_inline_qos = r.u16(le);
  uint32_t rk = (static_cast<uint32_t>(r.u8()) << 16);
  rk |= static_cast<uint32_t>(r.u8()) << 8;
  rk |= r.u8();
  d.reader_entity_key = rk;
  d.reader_entity_kind = r.u8();
  uint32_t wk = (static_cast<uint32_t>(r.u8()) << 16);
  wk |= static_cast<uint32_t>(r.u8()) << 8;
  wk |= r.u8();
  d.writer_entity_key = wk;
  d.writer_entity_kind = r.u8();
  d.writer_seq_hi = static_cast<int32_t>(r.u32(le));
  d.writer_seq_low = r.u32(le);
  d.payload.encapsulation_kind = r.u16be();
  d.payload.encapsulation_options = r.u16be();
  parse_parameter_list(r, d.payload, le, problems);
  return d;
}

}  // namespace

Parsed parse_message(std::span<const uint8_t> bytes, ParseMode mode) {
  Parsed out;
  Problems problems(mode, out.diagnostics);

  if (bytes.size() >= 4 &&
      !std::equal(kRtpsMagic.begin(), kRtpsMagic.end(), bytes.begin())) {
    throw WireError(WireErrorKind::BadMagic, "first 4 octets are not 'RTPS'");
  }
  if (bytes.size() < 20) {
    if (bytes.size() < 4 &&
        !std::equal(bytes.begin(), bytes.end(), kRtpsMagic.begin())) {
      throw WireError(WireErrorKind::BadMagic, "input shorter than the magic");
    }
    throw WireError(WireErrorKind::Truncated,
                    "RTPS header needs 20 octets, got " +
                        std::to_string(bytes.size()));
  }

  ByteReader r(bytes);
  r.skip(4);  // magic
  out.message.version.major = r.u8();
  out.message.version.minor = r.u8();
  out.message.vendor.id[0] = r.u8();
  out.message.vendor.id[1] = r.u8();
  out.message.guid_prefix.host_id = r.u32be();
  out.message.guid_prefix.app_id = r.u32be();
  out.message.guid_prefix.instance_id = r.u32be();

  while (r.remaining() > 0) {
    if (r.remaining() < 4) {
      problems.report(WireErrorKind::Truncated,
                      "trailing " + std::to_string(r.remaining()) +
                          " octet(s) cannot form a submessage header");
      break;
    }
    uint8_t id = r.u8();
    uint8_t flags = r.u8();
    bool le = (flags & 0x01) != 0;
    uint16_t o2nh = r.u16(le);
    size_t body_len = (o2nh == 0) ? r.remaining() : o2nh;
    if (body_len > r.remaining()) {
      problems.report(WireErrorKind::Truncated,
                      "submessage " + std::to_string(id) + " declares " +
                          std::to_string(o2nh) + " octets, only " +
                          std::to_string(r.remaining()) + " left");
      body_len = r.remaining();
    }
    Bytes body = r.take(body_len);
    if (id == kDataSubmessageId) {
      auto data = parse_data_body(body, flags, o2nh, problems);
      if (data) {
        out.message.submessages.emplace_back(std::move(*data));
        continue;
      }
      // fall through: keep the unparseable body opaquely
    }
    OpaqueSubmessage op;
    op.id = id;
    op.flags = flags;
    op.octets_to_next_header = o2nh;
    op.body = std::move(body);
    out.message.submessages.emplace_back(std::move(op));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builders

RtpsMessage build_header_only(ProtocolVersion version, VendorId vendor,
                              GuidPrefix prefix) {
  RtpsMessage msg;
  msg.version = version;
  msg.vendor = vendor;
  msg.guid_prefix = prefix;
  return msg;
}

RtpsMessage build_spdp_data(const SpdpConfig& cfg) {
  RtpsMessage msg = build_header_only(cfg.version, cfg.vendor, cfg.guid_prefix);

  DataSubmessage d;  // defaults already mirror the crafted discovery DATA
  d.payload.trailing_sentinel = cfg.trailing_sentinel;

  auto& params = d.payload.parameters;
  params.push_back(Parameter::make(pid::kBuiltinEndpointQos, EndpointQosBody{}));
  params.push_back(Parameter::make(pid::kDomainId, DomainIdBody{cfg.domain_id}));
  params.push_back(Parameter::make(pid::kProtocolVersion,
                                   ProtocolVersionBody{cfg.version, {}}));
  std::array<uint8_t, 16> guid =
      cfg.participant_guid ? *cfg.participant_guid
                           : participant_guid_for(cfg.guid_prefix);
  params.push_back(Parameter::make(pid::kParticipantGuid,
                                   ParticipantGuidBody{guid}));
  params.push_back(Parameter::make(pid::kVendorId,
                                   VendorIdBody{cfg.vendor, {}}));
  params.push_back(Parameter::make(
      pid::kParticipantBuiltinEndpoints,
      ParticipantBuiltinEndpointsBody{cfg.builtin_endpoint_set}));
  params.push_back(Parameter::make(
      pid::kBuiltinEndpointSet, BuiltinEndpointSetBody{cfg.builtin_endpoint_set}));
  params.push_back(Parameter::make(pid::kMetatrafficUnicastLocator,
                                   LocatorBody{cfg.metatraffic_unicast}));
  params.push_back(Parameter::make(pid::kMetatrafficMulticastLocator,
                                   LocatorBody{cfg.metatraffic_multicast}));
  params.push_back(Parameter::make(pid::kDefaultUnicastLocator,
                                   LocatorBody{cfg.default_unicast}));
  params.push_back(Parameter::make(pid::kDefaultMulticastLocator,
                                   LocatorBody{cfg.default_multicast}));
  params.push_back(Parameter::make(pid::kManualLivelinessCount,
                                   LivelinessCountBody{cfg.liveliness_count}));
  for (const Parameter& extra : cfg.extra_params) params.push_back(extra);

  msg.submessages.emplace_back(std::move(d));
  return msg;
}

RtpsMessage corrupt_parameter_length(RtpsMessage msg, uint16_t p,
                                     uint16_t new_length) {
  for (Submessage& sub : msg.submessages) {
    auto* data = std::get_if<DataSubmessage>(&sub);
    if (!data) continue;
    for (Parameter& param : data->payload.parameters) {
      if (param.pid == p) {
        param.declared_length = new_length;
        return msg;
      }
    }
  }
  throw WireError(WireErrorKind::PidNotFound,
                  "no parameter with pid " + std::to_string(p));
}

}  // namespace roswire::rtps
