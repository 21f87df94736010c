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

#ifndef QKD2WAY_TYPES_HPP
#define QKD2WAY_TYPES_HPP

#include <cstdint>
#include <string_view>

namespace qkd2way {

/// Measurement / preparation basis. Z eigenstates are |0>,|1>; X eigenstates
/// are |+>,|->.
enum class Basis : std::uint8_t { Z = 0, X = 1 };

enum class Protocol : std::uint8_t { LM05, BB84 };

constexpr std::string_view to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }
constexpr std::string_view to_string(Protocol p) { return p == Protocol::LM05 ? "lm05" : "bb84"; }

constexpr Basis basis_from_bit(int bit) { return bit ? Basis::X : Basis::Z; }

/// Parses "lm05"/"bb84" (case-insensitive). Throws std::invalid_argument.
Protocol parse_protocol(std::string_view text);

}  // namespace qkd2way

#endif  // QKD2WAY_TYPES_HPP
