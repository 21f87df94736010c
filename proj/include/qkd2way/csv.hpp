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

#ifndef QKD2WAY_CSV_HPP
#define QKD2WAY_CSV_HPP

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace qkd2way::csv {

/// Shortest decimal that round-trips, '.' separator, locale-independent.
/// NaN and infinities become an empty cell.
std::string number(double value);

/// Writes `cells` joined by ',' and terminated by '\n'.
void row(std::ostream& out, std::initializer_list<std::string_view> cells);

}  // namespace qkd2way::csv

#endif  // QKD2WAY_CSV_HPP
