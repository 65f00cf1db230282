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
#include <string>

#include "roswire/error.hpp"

// Live-emission gate. Attack traffic leaves this process only when the
// operator passed the explicit confirmation flag AND the destination is in
// the loopback/RFC1918 allowlist (or the override environment variable is
// set). Everything else stays in dry-run or pcap output.
namespace roswire::safety {

inline constexpr const char* kOverrideEnv = "ROSWIRE_ALLOW_ANY_TARGET";

class SafetyGateRefused : public Error {
public:
  using Error::Error;
};

/// Loopback or RFC1918 private space (host-order address).
bool address_allowlisted(uint32_t address);

struct GateDecision {
  bool allowed = false;
  std::string reason;
};

GateDecision check_live_target(uint32_t address, bool confirm_flag);

/// Throws SafetyGateRefused with the gate's name and reason when not allowed.
void require_live_allowed(uint32_t address, bool confirm_flag);

}  // namespace roswire::safety
