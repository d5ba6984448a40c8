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


#include "keyvalue.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace risurllc::detail
{

KeyValueError::KeyValueError(int line, const std::string& what)
    : std::invalid_argument("line " + std::to_string(line) + ": " + what), line_(line)
{
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<KeyValue> parse_key_values(std::string_view text)
{
    std::vector<KeyValue> out;
    std::set<std::string, std::less<>> seen;
    int line = 0;
    while (!text.empty())
    {
        ++line;
        const auto nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty())
            continue;
        const auto eq = raw.find('=');
        if (eq == std::string_view::npos)
            throw KeyValueError(line, "expected 'key = value'");
        const std::string_view key = trim(raw.substr(0, eq));
        const std::string_view value = trim(raw.substr(eq + 1));
        if (key.empty())
            throw KeyValueError(line, "empty key");
        if (value.empty())
            throw KeyValueError(line, "empty value for '" + std::string(key) + "'");
        if (!seen.emplace(key).second)
            throw KeyValueError(line, "duplicate key '" + std::string(key) + "'");
        out.push_back({std::string(key), std::string(value), line});
    }
    return out;
}

std::vector<std::string> split_list(std::string_view s, int line)
{
    std::vector<std::string> out;
    while (true)
    {
        const auto comma = s.find(',');
        const std::string_view item = trim(s.substr(0, comma));
        if (item.empty())
            throw KeyValueError(line, "empty list item");
        out.emplace_back(item);
        if (comma == std::string_view::npos)
            break;
        s = s.substr(comma + 1);
    }
    return out;
}

double parse_double(std::string_view s, int line)
{
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        throw KeyValueError(line, "not a finite number: '" + std::string(s) + "'");
    return v;
}

long long parse_integer(std::string_view s, int line)
{
    s = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw KeyValueError(line, "not an integer: '" + std::string(s) + "'");
    return v;
}

bool parse_bool(std::string_view s, int line)
{
    s = trim(s);
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw KeyValueError(line, "not a boolean: '" + std::string(s) + "'");
}

} // namespace risurllc::detail
