// SPDX-License-Identifier: Apache-2.0
//
// risurllc: RIS-aided eMBB/URLLC puncturing simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

// Line-oriented "key = value" reader with '#' comments. Internal header.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace risurllc::detail
{

struct KeyValue
{
    std::string key;
    std::string value;
    int line = 0;
};

class KeyValueError : public std::invalid_argument
{
public:
    KeyValueError(int line, const std::string& what);
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

/// Entries in file order. Rejects lines without '=', empty keys and repeated keys.
std::vector<KeyValue> parse_key_values(std::string_view text);

std::string_view trim(std::string_view s);

/// Comma-separated items, trimmed; empty items are rejected.
std::vector<std::string> split_list(std::string_view s, int line);

double parse_double(std::string_view s, int line);
long long parse_integer(std::string_view s, int line);
bool parse_bool(std::string_view s, int line);

} // namespace risurllc::detail
