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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roswire/error.hpp"
#include "roswire/xmlrpc.hpp"

// ROS 1 computational-graph client: system analysis plus the unauthenticated
// Master/Slave API abuses (publisherUpdate spoofing, node unregistration,
// remote shutdown, master scanning). None of these calls carries credentials;
// that absence is the vulnerability under study.
namespace roswire::graph {

using Millis = std::chrono::milliseconds;

enum class RpcErrorKind {
  ConnectionFailed,
  NotXmlRpc,
  NotRosMaster,
  SlaveFault,
  TargetRejected,
  UnknownSubscriber,
  UnknownTopic,
  UnknownNode,
};

class RpcError : public Error {
public:
  RpcError(RpcErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  RpcErrorKind kind() const { return kind_; }

private:
  RpcErrorKind kind_;
};

struct NodeInfo {
  std::string name;        // graph name, e.g. /publisher
  std::string xmlrpc_uri;  // http://host:port/; empty when lookup failed
  bool operator==(const NodeInfo&) const = default;
};

struct TopicInfo {
  std::string name;
  std::string datatype;
  bool operator==(const TopicInfo&) const = default;
};

struct Communication {
  TopicInfo topic;
  std::vector<NodeInfo> publishers;
  std::vector<NodeInfo> subscribers;
  bool operator==(const Communication&) const = default;
};

struct RosGraph {
  std::string master_uri;
  std::vector<NodeInfo> nodes;
  std::vector<TopicInfo> topics;
  std::vector<std::string> services;
  std::vector<Communication> communications;
  std::vector<std::string> parameters;

  const NodeInfo* find_node(const std::string& name) const;
  const Communication* find_communication(const std::string& topic) const;
  bool operator==(const RosGraph&) const = default;
};

struct SystemState {
  struct TopicNodes {
    std::string name;
    std::vector<std::string> nodes;
    bool operator==(const TopicNodes&) const = default;
  };
  std::vector<TopicNodes> publishers;
  std::vector<TopicNodes> subscribers;
  std::vector<TopicNodes> services;  // name = service, nodes = providers
  bool operator==(const SystemState&) const = default;
};

/// host/port split of an http://host:port/ URI.
std::pair<std::string, uint16_t> parse_http_uri(const std::string& uri);

/// One XML-RPC request/response against an endpoint URI.
xmlrpc::Response call_uri(const std::string& uri, const std::string& method,
                          std::vector<xmlrpc::Value> params, Millis timeout);

SystemState get_system_state(const std::string& master_uri,
                             const std::string& caller_id,
                             Millis timeout = Millis{1000});

/// Joins getSystemState, lookupNode, getTopicTypes and getParamNames into one
/// graph snapshot. Node URIs that fail to resolve stay empty, not fatal.
RosGraph analyze_system(const std::string& master_uri,
                        const std::string& caller_id = "/roswire",
                        Millis timeout = Millis{1000});

/// Raw slave-API publisherUpdate: replaces the subscriber's publisher list
/// for the topic with exactly the given URIs. Returns the slave status code.
int publisher_update(const std::string& subscriber_uri, const std::string& topic,
                     const std::vector<std::string>& publisher_uris,
                     const std::string& caller_id, Millis timeout = Millis{1000});

/// publisherUpdate variants computed from an analyzed graph snapshot
/// (analyze first, act second). Victims/additions are matched by node name.
int remove_publishers(const RosGraph& graph, const NodeInfo& subscriber,
                      const std::string& topic,
                      const std::vector<NodeInfo>& victims,
                      const std::string& caller_id, Millis timeout = Millis{1000});
int set_publishers(const RosGraph& graph, const NodeInfo& subscriber,
                   const std::string& topic,
                   const std::vector<NodeInfo>& publishers,
                   const std::string& caller_id, Millis timeout = Millis{1000});
int add_publishers(const RosGraph& graph, const NodeInfo& subscriber,
                   const std::string& topic,
                   const std::vector<NodeInfo>& additions,
                   const std::string& caller_id, Millis timeout = Millis{1000});

struct UnregisterReport {
  std::vector<std::string> topics_unregistered;
  std::vector<std::string> services_unregistered;
  std::vector<std::string> errors;  // per-entry failures, partial success
};

/// Unregisters every publication, subscription and service of the node at
/// the master, spoofing callerId = the node's own name and its recorded URI.
/// Pass an empty caller_id to use that default.
UnregisterReport unregister_node(const std::string& master_uri,
                                 const std::string& node_name,
                                 const RosGraph& graph,
                                 const std::string& caller_id = "",
                                 Millis timeout = Millis{1000});

/// XML-RPC shutdown against a master (or any slave exposing it).
int shutdown_remote(const std::string& target_uri, const std::string& caller_id,
                    const std::string& reason, Millis timeout = Millis{1000});

enum class EndpointClass { Found, NotRosHost, XmlRpcButNotRos };

struct ScanResult {
  std::string host;
  uint16_t port = 0;
  EndpointClass classification = EndpointClass::NotRosHost;
  std::string detail;
};

struct PortRange {
  uint16_t lo = 0;
  uint16_t hi = 0;  // inclusive
};

/// Probes every host x port with getSystemState under bounded concurrency.
/// Results come back sorted by (host, port) regardless of parallelism.
std::vector<ScanResult> scan_ros1(const std::vector<std::string>& hosts,
                                  PortRange ports, const std::string& caller_id,
                                  Millis timeout, unsigned parallelism);

std::vector<ScanResult> scan_hits(const std::vector<ScanResult>& results);

enum class SrosVerdict { Plaintext, HandshakeLike, NoService };
std::string_view sros_verdict_text(SrosVerdict v);

/// Heuristic only: sends a plaintext probe and inspects the reply shape.
/// A TLS-alert-like or otherwise binary non-HTTP answer reads as SROS-suspect.
SrosVerdict detect_sros(const std::string& host, uint16_t port, Millis timeout);

}  // namespace roswire::graph
