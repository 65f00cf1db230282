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

#include <stdexcept>
#include <string>

namespace roswire {

/// Base class for every error this toolkit raises on purpose. Anything not
/// derived from this escaping a parser is a bug (the fuzz suite checks that).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace roswire
