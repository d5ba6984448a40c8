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


#include "risurllc/scenario.hpp"

#include "keyvalue.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace risurllc
{

using detail::KeyValueError;

std::string_view to_string(SweepVar v)
{
    switch (v)
    {
    case SweepVar::ris_elements: return "ris_elements";
    case SweepVar::bs_power: return "bs_power";
    case SweepVar::delta: return "delta";
    case SweepVar::bs_ris_distance: return "bs_ris_distance";
    case SweepVar::urllc_users: return "urllc_users";
    }
    return "?";
}

std::vector<Variant> Scenario::variants() const
{
    std::vector<Variant> out;
    for (SchemeId s : schemes)
        for (Strategy st : strategies)
            for (Allocator a : allocators)
                out.push_back({s, st, a});
    return out;
}

namespace
{

using Setter = std::function<void(Scenario&, const std::string&, int)>;

int to_int(const std::string& v, int line)
{
    const long long x = detail::parse_integer(v, line);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw KeyValueError(line, "integer out of range");
    return static_cast<int>(x);
}

Setter int_field(int SystemConfig::*field)
{
    return [field](Scenario& s, const std::string& v, int line) { s.base.*field = to_int(v, line); };
}

Setter real_field(double SystemConfig::*field)
{
    return [field](Scenario& s, const std::string& v, int line) { s.base.*field = detail::parse_double(v, line); };
}

template <typename Member>
Setter nested(Member member)
{
    return [member](Scenario& s, const std::string& v, int line) { member(s.base) = detail::parse_double(v, line); };
}

template <typename T>
std::vector<T> parse_names(const std::string& v, int line, const std::map<std::string, T, std::less<>>& names)
{
    std::vector<T> out;
    for (const std::string& item : detail::split_list(v, line))
    {
        const auto it = names.find(item);
        if (it == names.end())
            throw KeyValueError(line, "unknown name '" + item + "'");
        if (std::find(out.begin(), out.end(), it->second) != out.end())
            throw KeyValueError(line, "repeated name '" + item + "'");
        out.push_back(it->second);
    }
    return out;
}

const std::map<std::string, Setter, std::less<>>& setters()
{
    static const std::map<std::string, Setter, std::less<>> table = {
        {"base.E", int_field(&SystemConfig::E)},
        {"base.U", int_field(&SystemConfig::U)},
        {"base.N", int_field(&SystemConfig::N)},
        {"base.M", int_field(&SystemConfig::M)},
        {"base.B", int_field(&SystemConfig::B)},
        {"base.W", real_field(&SystemConfig::W)},
        {"base.tau", real_field(&SystemConfig::tau)},
        {"base.packet_bits", real_field(&SystemConfig::packet_bits)},
        {"base.eps_embb", real_field(&SystemConfig::eps_embb)},
        {"base.eps_urllc", real_field(&SystemConfig::eps_urllc)},
        {"base.delta", real_field(&SystemConfig::delta)},
        {"base.r_th", real_field(&SystemConfig::r_th)},
        {"base.lambda", real_field(&SystemConfig::lambda)},
        {"base.randomization_trials", int_field(&SystemConfig::randomization_trials)},
        {"base.P_BS_dbm",
         [](Scenario& s, const std::string& v, int line) { s.base.P_BS = dbm_to_watt(detail::parse_double(v, line)); }},
        {"base.sigma2_dbm",
         [](Scenario& s, const std::string& v, int line) {
             s.base.sigma2 = dbm_to_watt(detail::parse_double(v, line));
         }},
        {"base.kappa",
         [](Scenario& s, const std::string& v, int line) {
             s.base.kappa = v == "inf" ? std::numeric_limits<double>::infinity() : detail::parse_double(v, line);
         }},
        {"base.coverage_radius", nested([](SystemConfig& c) -> double& { return c.geometry.coverage_radius_m; })},
        {"base.bs_ris_distance", nested([](SystemConfig& c) -> double& { return c.geometry.bs_ris_distance_m; })},
        {"base.min_distance", nested([](SystemConfig& c) -> double& { return c.geometry.min_distance_m; })},
        {"base.rho0", nested([](SystemConfig& c) -> double& { return c.pathloss.rho0; })},
        {"base.rho1", nested([](SystemConfig& c) -> double& { return c.pathloss.rho1; })},
        {"base.rho2", nested([](SystemConfig& c) -> double& { return c.pathloss.rho2; })},
        {"base.alpha0_db",
         [](Scenario& s, const std::string& v, int line) {
             s.base.pathloss.alpha0 = db_to_linear(detail::parse_double(v, line));
         }},
        {"base.alpha1_db",
         [](Scenario& s, const std::string& v, int line) {
             s.base.pathloss.alpha1 = db_to_linear(detail::parse_double(v, line));
         }},
        {"trials", [](Scenario& s, const std::string& v, int line) { s.trials = to_int(v, line); }},
        {"threads", [](Scenario& s, const std::string& v, int line) { s.threads = to_int(v, line); }},
        {"timing", [](Scenario& s, const std::string& v, int line) { s.timing = detail::parse_bool(v, line); }},
        {"seed",
         [](Scenario& s, const std::string& v, int line) {
             const long long x = detail::parse_integer(v, line);
             if (x < 0)
                 throw KeyValueError(line, "seed must be >= 0");
             s.seed = static_cast<std::uint64_t>(x);
         }},
        {"schemes",
         [](Scenario& s, const std::string& v, int line) {
             s.schemes = parse_names<SchemeId>(v, line,
                                               {{"no_ris", SchemeId::no_ris},
                                                {"scheme1", SchemeId::scheme1},
                                                {"scheme2", SchemeId::scheme2},
                                                {"scheme3", SchemeId::scheme3},
                                                {"selected", SchemeId::selected}});
         }},
        {"strategy",
         [](Scenario& s, const std::string& v, int line) {
             s.strategies = parse_names<Strategy>(v, line, {{"merl", Strategy::merl}, {"pf", Strategy::pf}});
         }},
        {"allocator",
         [](Scenario& s, const std::string& v, int line) {
             s.allocators = parse_names<Allocator>(
                 v, line, {{"optimization", Allocator::optimization}, {"heuristic", Allocator::heuristic}});
         }},
    };
    return table;
}

const std::map<std::string, SweepVar, std::less<>> sweep_names = {
    {"sweep.ris_elements", SweepVar::ris_elements},
    {"sweep.bs_power", SweepVar::bs_power},
    {"sweep.delta", SweepVar::delta},
    {"sweep.bs_ris_distance", SweepVar::bs_ris_distance},
    {"sweep.urllc_users", SweepVar::urllc_users},
};

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

} // namespace

Scenario parse_scenario(std::string_view text)
{
    Scenario s;
    bool have_sweep = false;
    try
    {
        for (const auto& kv : detail::parse_key_values(text))
        {
            if (const auto sw = sweep_names.find(kv.key); sw != sweep_names.end())
            {
                if (have_sweep)
                    throw KeyValueError(kv.line, "only one sweep key is allowed");
                have_sweep = true;
                s.sweep_var = sw->second;
                for (const std::string& item : detail::split_list(kv.value, kv.line))
                    s.sweep_values.push_back(detail::parse_double(item, kv.line));
                continue;
            }
            const auto it = setters().find(kv.key);
            if (it == setters().end())
                throw KeyValueError(kv.line, "unknown key '" + kv.key + "'");
            it->second(s, kv.value, kv.line);
        }
    }
    catch (const KeyValueError& e)
    {
        throw ScenarioError(e.what());
    }
    if (!have_sweep)
        throw ScenarioError("scenario needs one sweep key (sweep.ris_elements, sweep.bs_power, sweep.delta, "
                            "sweep.bs_ris_distance or sweep.urllc_users)");
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

SystemConfig apply_sweep(const SystemConfig& base, SweepVar var, double value)
{
    if (!std::isfinite(value))
        throw ScenarioError("sweep values must be finite");
    auto count = [&](const char* what) {
        if (value < 0.0 || value != std::floor(value) || value > 1e6)
            throw ScenarioError(std::string(what) + " sweep values must be non-negative integers");
        return static_cast<int>(value);
    };
    SystemConfig cfg = base;
    switch (var)
    {
    case SweepVar::ris_elements: cfg.N = count("ris_elements"); break;
    case SweepVar::urllc_users: cfg.U = count("urllc_users"); break;
    case SweepVar::bs_power: cfg.P_BS = dbm_to_watt(value); break;
    case SweepVar::delta:
        if (value < 0.0 || value > 1.0)
            throw ScenarioError("delta sweep values must lie in [0, 1]");
        cfg.delta = value;
        break;
    case SweepVar::bs_ris_distance:
        if (!(value > 0.0))
            throw ScenarioError("bs_ris_distance sweep values must be positive");
        cfg.geometry.bs_ris_distance_m = value;
        break;
    }
    return cfg;
}

void validate(const Scenario& s)
{
    if (s.trials < 1)
        throw ScenarioError("trials must be >= 1");
    if (s.threads < 1)
        throw ScenarioError("threads must be >= 1");
    if (s.sweep_values.empty())
        throw ScenarioError("sweep list is empty");
    if (s.schemes.empty() || s.strategies.empty() || s.allocators.empty())
        throw ScenarioError("schemes, strategy and allocator must be non-empty");
    for (double v : s.sweep_values)
    {
        const SystemConfig cfg = apply_sweep(s.base, s.sweep_var, v);
        try
        {
            validate(cfg);
        }
        catch (const InfeasibleConfig&)
        {
            throw;
        }
        catch (const std::invalid_argument& e)
        {
            throw ScenarioError(std::string(to_string(s.sweep_var)) + " = " + format_number(v) + ": " + e.what());
        }
    }
}

std::vector<SweepRow> run_sweep(const Scenario& s)
{
    validate(s);
    std::vector<double> values = s.sweep_values;
    std::stable_sort(values.begin(), values.end());
    const std::vector<Variant> variants = s.variants();
    TrialOptions options;
    options.timing = s.timing;
    std::vector<SweepRow> rows;
    for (double v : values)
    {
        const SystemConfig cfg = apply_sweep(s.base, s.sweep_var, v);
        for (Metrics& m : run_point(cfg, variants, s.trials, s.seed, s.threads, options))
            rows.push_back({s.sweep_var, v, std::move(m)});
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, std::uint64_t seed)
{
    os << csv_header << '\n';
    for (const auto& r : rows)
    {
        const Metrics& m = r.metrics;
        os << to_string(r.var) << ',' << format_number(r.value) << ',' << to_string(m.variant.scheme) << ','
           << to_string(m.variant.strategy) << ',' << to_string(m.variant.allocator) << ',' << format_number(m.eta)
           << ',' << format_number(m.eta_se) << ',' << format_number(m.sum_rate) << ','
           << format_number(m.sum_rate_se) << ',' << format_number(m.embb_admission) << ','
           << format_number(m.runtime_ms_mean) << ',' << format_number(m.runtime_ms_p95) << ',' << m.trials << ','
           << seed << '\n';
    }
}

} // namespace risurllc
