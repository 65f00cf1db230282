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
#include <variant>
#include <vector>

#include "roswire/bytes.hpp"
#include "roswire/error.hpp"

// XML-RPC over HTTP POST, restricted to the value kinds the ROS Master and
// Slave APIs actually exchange: int, boolean, string and arrays thereof.
// Emission is canonical (fixed element order, newline placement matching the
// stock Python client) so crafted requests are byte-stable; parsing is
// permissive about header case, whitespace and <i4> aliases.
namespace roswire::xmlrpc {

enum class CodecErrorKind { MalformedHttp, MalformedXml, NotAnRpcMessage };

class CodecError : public Error {
public:
  CodecError(CodecErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  CodecErrorKind kind() const { return kind_; }

private:
  CodecErrorKind kind_;
};

class Value {
public:
  using Array = std::vector<Value>;

  Value() : v_(std::string()) {}
  Value(int32_t i) : v_(i) {}                       // NOLINT(runtime/explicit)
  Value(bool b) : v_(b) {}                          // NOLINT(runtime/explicit)
  Value(std::string s) : v_(std::move(s)) {}        // NOLINT(runtime/explicit)
  Value(const char* s) : v_(std::string(s)) {}      // NOLINT(runtime/explicit)
  Value(Array a) : v_(std::move(a)) {}              // NOLINT(runtime/explicit)

  bool is_int() const { return std::holds_alternative<int32_t>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_array() const { return std::holds_alternative<Array>(v_); }

  int32_t as_int() const;
  bool as_bool() const;
  const std::string& as_string() const;
  const Array& as_array() const;

  bool operator==(const Value&) const = default;

private:
  std::variant<int32_t, bool, std::string, Array> v_;
};

struct Call {
  std::string method_name;
  std::vector<Value> params;
  bool operator==(const Call&) const = default;
};

struct Fault {
  int32_t code = 0;
  std::string message;
  bool operator==(const Fault&) const = default;
};

struct Response {
  std::variant<std::vector<Value>, Fault> payload;

  static Response ok(std::vector<Value> values) {
    return Response{std::move(values)};
  }
  static Response fault(int32_t code, std::string message) {
    return Response{Fault{code, std::move(message)}};
  }
  bool is_fault() const { return std::holds_alternative<Fault>(payload); }
  const std::vector<Value>& values() const {
    return std::get<std::vector<Value>>(payload);
  }
  const Fault& fault_value() const { return std::get<Fault>(payload); }
  bool operator==(const Response&) const = default;
};

// A stock client identification keeps crafted calls indistinguishable from
// everyday ROS tooling traffic.
inline constexpr const char* kDefaultUserAgent =
    "xmlrpclib.py/1.0.1 (by www.pythonware.com)";

struct HttpOptions {
  std::string user_agent = kDefaultUserAgent;
  std::string server_name = "BaseHTTP/0.6 Python/3.8.10";
};

std::string emit_call_xml(const Call& call);
std::string emit_response_xml(const Response& response);

/// Full HTTP/1.1 POST to /RPC2 carrying the methodCall document.
Bytes encode_call(const Call& call, const std::string& host, uint16_t port,
                  const HttpOptions& options = {});
Call decode_call(std::span<const uint8_t> bytes);

Bytes encode_response(const Response& response, const HttpOptions& options = {});
Response decode_response(std::span<const uint8_t> bytes);

/// Split a complete HTTP message into (start line, headers, body). Header
/// names are matched case-insensitively; the body is cut to Content-Length
/// when one is present.
struct HttpMessage {
  std::string start_line;
  std::vector<std::pair<std::string, std::string>> headers;
  Bytes body;
  std::optional<std::string> header(const std::string& name) const;
};
HttpMessage split_http(std::span<const uint8_t> bytes);

}  // namespace roswire::xmlrpc
