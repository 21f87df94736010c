// Copyright 2026 The qkd2way Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qkd2way/types.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace qkd2way {

Protocol parse_protocol(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "lm05") return Protocol::LM05;
  if (lower == "bb84") return Protocol::BB84;
  throw std::invalid_argument("unknown protocol '" + std::string(text) + "' (expected lm05 or bb84)");
}

}  // namespace qkd2way
