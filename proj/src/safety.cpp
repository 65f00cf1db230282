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

#include "roswire/safety.hpp"

#include <cstdlib>

#include "roswire/bytes.hpp"

namespace roswire::safety {

bool address_allowlisted(uint32_t a) {
  if ((a >> 24) == 127) return true;                    // 127.0.0.0/8
  if ((a >> 24) == 10) return true;                     // 10.0.0.0/8
  if ((a >> 20) == (172u << 4 | 1)) return true;        // 172.16.0.0/12
  if ((a >> 16) == ((192u << 8) | 168u)) return true;   // 192.168.0.0/16
  return false;
}

GateDecision check_live_target(uint32_t address, bool confirm_flag) {
  if (!confirm_flag) {
    return {false, "safety gate: live emission requires --confirm-live"};
  }
  if (!address_allowlisted(address) && std::getenv(kOverrideEnv) == nullptr) {
    return {false, "safety gate: " + format_ipv4(address) +
                       " is outside the loopback/RFC1918 allowlist (set " +
                       std::string(kOverrideEnv) + "=1 to override)"};
  }
  return {true, ""};
}

void require_live_allowed(uint32_t address, bool confirm_flag) {
  GateDecision d = check_live_target(address, confirm_flag);
  if (!d.allowed) throw SafetyGateRefused(d.reason);
}

}  // namespace roswire::safety
