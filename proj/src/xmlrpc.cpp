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

#include "roswire/xmlrpc.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace roswire::xmlrpc {

int32_t Value::as_int() const {
  if (!is_int()) throw CodecError(CodecErrorKind::NotAnRpcMessage, "value is not an int");
  return std::get<int32_t>(v_);
}

bool Value::as_bool() const {
  if (!is_bool()) throw CodecError(CodecErrorKind::NotAnRpcMessage, "value is not a boolean");
  return std::get<bool>(v_);
}

const std::string& Value::as_string() const {
  if (!is_string()) throw CodecError(CodecErrorKind::NotAnRpcMessage, "value is not a string");
  return std::get<std::string>(v_);
}

const Value::Array& Value::as_array() const {
  if (!is_array()) throw CodecError(CodecErrorKind::NotAnRpcMessage, "value is not an array");
  return std::get<Array>(v_);
}

// ---------------------------------------------------------------------------
// Canonical XML emission (newline placement mirrors the stock Python client)

namespace {

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void emit_value(const Value& v, std::string& out) {
  if (v.is_int()) {
    out += "<value><int>" + std::to_string(v.as_int()) + "</int></value>\n";
  } else if (v.is_bool()) {
    out += std::string("<value><boolean>") + (v.as_bool() ? "1" : "0") +
           "</boolean></value>\n";
  } else if (v.is_string()) {
    out += "<value><string>" + escape_xml(v.as_string()) + "</string></value>\n";
  } else {
    out += "<value><array><data>\n";
    for (const Value& item : v.as_array()) emit_value(item, out);
    out += "</data></array></value>\n";
  }
}

void emit_params(const std::vector<Value>& params, std::string& out) {
  out += "<params>\n";
  for (const Value& p : params) {
    out += "<param>\n";
    emit_value(p, out);
    out += "</param>\n";
  }
  out += "</params>\n";
}

}  // namespace

std::string emit_call_xml(const Call& call) {
  std::string out = "<?xml version='1.0'?>\n<methodCall>\n<methodName>";
  out += escape_xml(call.method_name);
  out += "</methodName>\n";
  emit_params(call.params, out);
  out += "</methodCall>\n";
  return out;
}

std::string emit_response_xml(const Response& response) {
  std::string out = "<?xml version='1.0'?>\n<methodResponse>\n";
  if (response.is_fault()) {
    const Fault& f = response.fault_value();
    out += "<fault>\n<value><struct>\n<member>\n<name>faultCode</name>\n";
    out += "<value><int>" + std::to_string(f.code) + "</int></value>\n";
    out += "</member>\n<member>\n<name>faultString</name>\n";
    out += "<value><string>" + escape_xml(f.message) + "</string></value>\n";
    out += "</member>\n</struct></value>\n</fault>\n";
  } else {
    emit_params(response.values(), out);
  }
  out += "</methodResponse>\n";
  return out;
}

// ---------------------------------------------------------------------------
// HTTP framing

Bytes encode_call(const Call& call, const std::string& host, uint16_t port,
                  const HttpOptions& options) {
  std::string body = emit_call_xml(call);
  std::string head = "POST /RPC2 HTTP/1.1\r\n";
  head += "Accept-Encoding: gzip\r\n";
  head += "Content-Length: " + std::to_string(body.size()) + "\r\n";
  head += "Content-Type: text/xml\r\n";
  head += "Host: " + host + ":" + std::to_string(port) + "\r\n";
  head += "User-Agent: " + options.user_agent + "\r\n\r\n";
  ByteWriter w;
  w.raw(head);
  w.raw(body);
  return w.take();
}

Bytes encode_response(const Response& response, const HttpOptions& options) {
  std::string body = emit_response_xml(response);
  std::string head = "HTTP/1.1 200 OK\r\n";
  head += "Server: " + options.server_name + "\r\n";
  head += "Content-Type: text/xml\r\n";
  head += "Content-Length: " + std::to_string(body.size()) + "\r\n\r\n";
  ByteWriter w;
  w.raw(head);
  w.raw(body);
  return w.take();
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<std::string> HttpMessage::header(const std::string& name) const {
  std::string needle = lower(name);
  for (const auto& [key, value] : headers) {
    if (lower(key) == needle) return value;
  }
  return std::nullopt;
}

HttpMessage split_http(std::span<const uint8_t> bytes) {
  std::string text(bytes.begin(), bytes.end());
  size_t head_end = text.find("\r\n\r\n");
  size_t body_start;
  if (head_end != std::string::npos) {
    body_start = head_end + 4;
  } else {
    // Tolerate bare-LF framing from sloppy peers.
    head_end = text.find("\n\n");
    if (head_end == std::string::npos) {
      throw CodecError(CodecErrorKind::MalformedHttp,
                       "no header/body separator found");
    }
    body_start = head_end + 2;
  }

  HttpMessage msg;
  size_t pos = 0;
  bool first = true;
  while (pos < head_end) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos || eol > head_end) eol = head_end;
    std::string line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    if (first) {
      msg.start_line = line;
      first = false;
      continue;
    }
    size_t colon = line.find(':');
    if (colon == std::string::npos) {
      throw CodecError(CodecErrorKind::MalformedHttp,
                       "header line without ':': " + line);
    }
    msg.headers.emplace_back(trim(line.substr(0, colon)),
                             trim(line.substr(colon + 1)));
  }
  if (first) {
    throw CodecError(CodecErrorKind::MalformedHttp, "empty HTTP head");
  }

  msg.body.assign(bytes.begin() + body_start, bytes.end());
  if (auto cl = msg.header("Content-Length")) {
    size_t n = 0;
    auto [ptr, ec] = std::from_chars(cl->data(), cl->data() + cl->size(), n);
    if (ec != std::errc{} || ptr != cl->data() + cl->size()) {
      throw CodecError(CodecErrorKind::MalformedHttp,
                       "unparseable Content-Length: " + *cl);
    }
    if (n > msg.body.size()) {
      throw CodecError(CodecErrorKind::MalformedHttp,
                       "Content-Length " + std::to_string(n) + " exceeds " +
                           std::to_string(msg.body.size()) + " body octets");
    }
    msg.body.resize(n);
  }
  return msg;
}

// ---------------------------------------------------------------------------
// Minimal permissive XML reader for the methodCall / methodResponse subset

namespace {

struct XmlNode {
  std::string tag;
  std::vector<XmlNode> children;
  std::string text;  // concatenated direct character data

  const XmlNode* child(const std::string& name) const {
    for (const XmlNode& c : children) {
      if (c.tag == name) return &c;
    }
    return nullptr;
  }
};

class XmlReader {
public:
  explicit XmlReader(const std::string& text) : text_(text) {}

  XmlNode parse_document() {
    skip_misc();
    XmlNode root = parse_element();
    return root;
  }

private:
  [[noreturn]] void fail(const std::string& what) {
    throw CodecError(CodecErrorKind::MalformedXml,
                     what + " at offset " + std::to_string(pos_));
  }

  bool starts_with(const char* s) const {
    return text_.compare(pos_, std::char_traits<char>::length(s), s) == 0;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  // Prologue, comments, processing instructions.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<?")) {
        size_t end = text_.find("?>", pos_);
        if (end == std::string::npos) fail("unterminated processing instruction");
        pos_ = end + 2;
      } else if (starts_with("<!--")) {
        size_t end = text_.find("-->", pos_);
        if (end == std::string::npos) fail("unterminated comment");
        pos_ = end + 3;
      } else {
        return;
      }
    }
  }

  std::string read_name() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.' || text_[pos_] == '_' || text_[pos_] == '-' ||
            text_[pos_] == ':')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a tag name");
    return text_.substr(start, pos_ - start);
  }

  XmlNode parse_element() {
    if (pos_ >= text_.size() || text_[pos_] != '<') fail("expected '<'");
    ++pos_;
    XmlNode node;
    node.tag = read_name();
    // Skip attributes (none are expected, but tolerate them).
    size_t close = text_.find('>', pos_);
    if (close == std::string::npos) fail("unterminated start tag");
    bool self_closing = close > 0 && text_[close - 1] == '/';
    pos_ = close + 1;
    if (self_closing) return node;

    for (;;) {
      if (pos_ >= text_.size()) fail("unexpected end inside <" + node.tag + ">");
      if (text_[pos_] == '<') {
        if (starts_with("</")) {
          pos_ += 2;
          std::string name = read_name();
          if (name != node.tag) {
            fail("mismatched </" + name + "> for <" + node.tag + ">");
          }
          size_t end = text_.find('>', pos_);
          if (end == std::string::npos) fail("unterminated end tag");
          pos_ = end + 1;
          return node;
        }
        if (starts_with("<!--")) {
          size_t end = text_.find("-->", pos_);
          if (end == std::string::npos) fail("unterminated comment");
          pos_ = end + 3;
          continue;
        }
        node.children.push_back(parse_element());
      } else {
        size_t next = text_.find('<', pos_);
        if (next == std::string::npos) fail("character data outside an element");
        node.text += unescape(text_.substr(pos_, next - pos_));
        pos_ = next;
      }
    }
  }

  std::string unescape(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    size_t i = 0;
    while (i < raw.size()) {
      if (raw[i] != '&') {
        out.push_back(raw[i++]);
        continue;
      }
      size_t semi = raw.find(';', i);
      if (semi == std::string::npos) fail("unterminated entity");
      std::string entity = raw.substr(i + 1, semi - i - 1);
      if (entity == "lt") out.push_back('<');
      else if (entity == "gt") out.push_back('>');
      else if (entity == "amp") out.push_back('&');
      else if (entity == "quot") out.push_back('"');
      else if (entity == "apos") out.push_back('\'');
      else if (!entity.empty() && entity[0] == '#') {
        int code = 0;
        auto* begin = entity.data() + 1;
        auto* end = entity.data() + entity.size();
        int base = 10;
        if (begin < end && (*begin == 'x' || *begin == 'X')) {
          ++begin;
          base = 16;
        }
        auto [p, ec] = std::from_chars(begin, end, code, base);
        if (ec != std::errc{} || p != end || code < 0 || code > 0x7F) {
          fail("unsupported character reference &" + entity + ";");
        }
        out.push_back(static_cast<char>(code));
      } else {
        fail("unknown entity &" + entity + ";");
      }
      i = semi + 1;
    }
    return out;
  }

  const std::string& text_;
  size_t pos_ = 0;
};

int32_t parse_int_text(const std::string& raw) {
  std::string t = trim(raw);
  int32_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size()) {
    throw CodecError(CodecErrorKind::MalformedXml, "bad int literal: " + raw);
  }
  return v;
}

Value decode_value(const XmlNode& value_node) {
  if (value_node.children.empty()) {
    // Untyped <value> defaults to string, verbatim.
    return Value(value_node.text);
  }
  const XmlNode& typed = value_node.children.front();
  if (typed.tag == "int" || typed.tag == "i4") {
    return Value(parse_int_text(typed.text));
  }
  if (typed.tag == "boolean") {
    std::string t = trim(typed.text);
    if (t == "1" || t == "true") return Value(true);
    if (t == "0" || t == "false") return Value(false);
    throw CodecError(CodecErrorKind::MalformedXml, "bad boolean literal: " + t);
  }
  if (typed.tag == "string") {
    return Value(typed.text);
  }
  if (typed.tag == "array") {
    const XmlNode* data = typed.child("data");
    if (!data) {
      throw CodecError(CodecErrorKind::MalformedXml, "<array> without <data>");
    }
    Value::Array items;
    for (const XmlNode& child : data->children) {
      if (child.tag != "value") {
        throw CodecError(CodecErrorKind::MalformedXml,
                         "<data> holds non-<value> child: " + child.tag);
      }
      items.push_back(decode_value(child));
    }
    return Value(std::move(items));
  }
  throw CodecError(CodecErrorKind::NotAnRpcMessage,
                   "unsupported value kind <" + typed.tag + ">");
}

std::vector<Value> decode_params(const XmlNode* params) {
  std::vector<Value> out;
  if (!params) return out;
  for (const XmlNode& param : params->children) {
    if (param.tag != "param") continue;
    const XmlNode* value = param.child("value");
    if (!value) {
      throw CodecError(CodecErrorKind::MalformedXml, "<param> without <value>");
    }
    out.push_back(decode_value(*value));
  }
  return out;
}

XmlNode parse_xml_body(const Bytes& body) {
  if (body.empty()) {
    throw CodecError(CodecErrorKind::MalformedXml, "empty XML body");
  }
  std::string text(body.begin(), body.end());
  XmlReader reader(text);
  return reader.parse_document();
}

}  // namespace

Call decode_call(std::span<const uint8_t> bytes) {
  HttpMessage http = split_http(bytes);
  XmlNode root = parse_xml_body(http.body);
  if (root.tag != "methodCall") {
    throw CodecError(CodecErrorKind::NotAnRpcMessage,
                     "root element is <" + root.tag + ">, not <methodCall>");
  }
  const XmlNode* name = root.child("methodName");
  if (!name || name->text.empty()) {
    throw CodecError(CodecErrorKind::MalformedXml, "missing <methodName>");
  }
  Call call;
  call.method_name = trim(name->text);
  call.params = decode_params(root.child("params"));
  return call;
}

Response decode_response(std::span<const uint8_t> bytes) {
  HttpMessage http = split_http(bytes);
  // A peer that answers with a non-2xx status is speaking HTTP but is not
  // serving XML-RPC results.
  if (http.start_line.rfind("HTTP/", 0) == 0) {
    size_t sp = http.start_line.find(' ');
    if (sp == std::string::npos) {
      throw CodecError(CodecErrorKind::MalformedHttp,
                       "bad status line: " + http.start_line);
    }
    int status = 0;
    std::from_chars(http.start_line.data() + sp + 1,
                    http.start_line.data() + http.start_line.size(), status);
    if (status < 200 || status > 299) {
      throw CodecError(CodecErrorKind::NotAnRpcMessage,
                       "HTTP status " + std::to_string(status));
    }
  }
  XmlNode root = parse_xml_body(http.body);
  if (root.tag != "methodResponse") {
    throw CodecError(CodecErrorKind::NotAnRpcMessage,
                     "root element is <" + root.tag + ">, not <methodResponse>");
  }
  if (const XmlNode* fault = root.child("fault")) {
    const XmlNode* value = fault->child("value");
    const XmlNode* strct = value ? value->child("struct") : nullptr;
    if (!strct) {
      throw CodecError(CodecErrorKind::MalformedXml, "<fault> without struct");
    }
    Fault f;
    for (const XmlNode& member : strct->children) {
      if (member.tag != "member") continue;
      const XmlNode* n = member.child("name");
      const XmlNode* v = member.child("value");
      if (!n || !v) continue;
      std::string key = trim(n->text);
      if (key == "faultCode") {
        Value code = decode_value(*v);
        f.code = code.is_int() ? code.as_int() : parse_int_text(code.as_string());
      } else if (key == "faultString") {
        Value msg = decode_value(*v);
        f.message = msg.is_string() ? msg.as_string() : trim(v->text);
      }
    }
    return Response::fault(f.code, f.message);
  }
  return Response::ok(decode_params(root.child("params")));
}

}  // namespace roswire::xmlrpc
