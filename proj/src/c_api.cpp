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


#include "risurllc/risurllc.h"

#include "risurllc/channel.hpp"
#include "risurllc/scenario.hpp"
#include "risurllc/urllc_alloc.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

struct rsu_scenario
{
    risurllc::Scenario scenario;
};

namespace
{

thread_local std::string last_error;

rsu_status fail(rsu_status s, const std::string& what)
{
    last_error = what;
    return s;
}

// Maps the exception in flight to a status code.
rsu_status translate()
{
    try
    {
        throw;
    }
    catch (const risurllc::ScenarioError& e)
    {
        return fail(RSU_VALIDATION_ERROR, e.what());
    }
    catch (const nlohmann::json::exception& e)
    {
        return fail(RSU_VALIDATION_ERROR, e.what());
    }
    catch (const risurllc::InfeasibleConfig& e)
    {
        return fail(RSU_INFEASIBLE, e.what());
    }
    catch (const std::domain_error& e)
    {
        return fail(RSU_DOMAIN_ERROR, e.what());
    }
    catch (const std::invalid_argument& e)
    {
        return fail(RSU_INVALID_ARGUMENT, e.what());
    }
    catch (const std::exception& e)
    {
        return fail(RSU_INTERNAL_ERROR, e.what());
    }
    catch (...)
    {
        return fail(RSU_INTERNAL_ERROR, "unknown error");
    }
}

template <typename F>
rsu_status guarded(F&& f)
{
    try
    {
        f();
        last_error.clear();
        return RSU_OK;
    }
    catch (...)
    {
        return translate();
    }
}

bool read_file(const char* path, std::string& out)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    out = buf.str();
    return true;
}

risurllc::MiniSlotProblem problem_from_json(const nlohmann::json& j)
{
    risurllc::MiniSlotProblem p;
    p.W = j.at("W").get<double>();
    p.c_th = j.at("c_th").get<double>();
    p.b = j.at("b").get<int>();
    for (const auto& d : j.at("donors"))
        p.donors.push_back({d.at("power").get<double>(), d.at("cap").get<int>(), d.at("weight").get<double>()});
    int next_id = 0;
    for (const auto& pk : j.at("packets"))
    {
        const int id = pk.contains("id") ? pk.at("id").get<int>() : next_id;
        p.packets.push_back({id, pk.at("alpha").get<double>()});
        next_id = id + 1;
    }
    try
    {
        p.check();
    }
    catch (const std::invalid_argument& e)
    {
        throw risurllc::ScenarioError(e.what());
    }
    return p;
}

} // namespace

extern "C" {

const char* rsu_version(void) { return "1.0.0"; }

const char* rsu_last_error(void) { return last_error.c_str(); }

rsu_status rsu_scenario_parse(const char* text, rsu_scenario** out)
{
    if (!text || !out)
        return fail(RSU_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new rsu_scenario{risurllc::parse_scenario(text)}; });
}

rsu_status rsu_scenario_load(const char* path, rsu_scenario** out)
{
    if (!path || !out)
        return fail(RSU_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    std::string text;
    if (!read_file(path, text))
        return fail(RSU_IO_ERROR, std::string("cannot read '") + path + "'");
    return rsu_scenario_parse(text.c_str(), out);
}

void rsu_scenario_free(rsu_scenario* scenario) { delete scenario; }

rsu_status rsu_scenario_set_trials(rsu_scenario* s, int trials)
{
    if (!s || trials < 1)
        return fail(RSU_INVALID_ARGUMENT, "trials must be >= 1");
    s->scenario.trials = trials;
    return RSU_OK;
}

rsu_status rsu_scenario_set_seed(rsu_scenario* s, uint64_t seed)
{
    if (!s)
        return fail(RSU_INVALID_ARGUMENT, "null scenario");
    s->scenario.seed = seed;
    return RSU_OK;
}

rsu_status rsu_scenario_set_threads(rsu_scenario* s, int threads)
{
    if (!s || threads < 1)
        return fail(RSU_INVALID_ARGUMENT, "threads must be >= 1");
    s->scenario.threads = threads;
    return RSU_OK;
}

rsu_status rsu_scenario_get_trials(const rsu_scenario* s, int* trials)
{
    if (!s || !trials)
        return fail(RSU_INVALID_ARGUMENT, "null argument");
    *trials = s->scenario.trials;
    return RSU_OK;
}

rsu_status rsu_scenario_get_seed(const rsu_scenario* s, uint64_t* seed)
{
    if (!s || !seed)
        return fail(RSU_INVALID_ARGUMENT, "null argument");
    *seed = s->scenario.seed;
    return RSU_OK;
}

rsu_status rsu_scenario_validate(const rsu_scenario* s)
{
    if (!s)
        return fail(RSU_INVALID_ARGUMENT, "null scenario");
    return guarded([&] { risurllc::validate(s->scenario); });
}

rsu_status rsu_run_sweep(const rsu_scenario* s, const char* csv_path)
{
    if (!s || !csv_path)
        return fail(RSU_INVALID_ARGUMENT, "null argument");
    const rsu_status checked = rsu_scenario_validate(s);
    if (checked != RSU_OK)
        return checked;
    std::vector<risurllc::SweepRow> rows;
    const rsu_status ran = guarded([&] { rows = risurllc::run_sweep(s->scenario); });
    if (ran != RSU_OK)
        return ran;
    std::ofstream out(csv_path, std::ios::binary);
    if (!out)
        return fail(RSU_IO_ERROR, std::string("cannot write '") + csv_path + "'");
    risurllc::write_csv(out, rows, s->scenario.seed);
    if (!out)
        return fail(RSU_IO_ERROR, std::string("write failed for '") + csv_path + "'");
    return RSU_OK;
}

rsu_status rsu_oracle_solve(const char* instance_path, char** result)
{
    if (!instance_path || !result)
        return fail(RSU_INVALID_ARGUMENT, "null argument");
    *result = nullptr;
    std::string text;
    if (!read_file(instance_path, text))
        return fail(RSU_IO_ERROR, std::string("cannot read '") + instance_path + "'");
    return guarded([&] {
        const risurllc::MiniSlotProblem p = problem_from_json(nlohmann::json::parse(text));
        risurllc::UrllcDecision d;
        try
        {
            d = risurllc::brute_force_allocate(p);
        }
        catch (const std::invalid_argument& e)
        {
            throw risurllc::ScenarioError(e.what());
        }
        nlohmann::json j;
        j["admitted"] = d.admitted();
        j["embb_loss"] = d.embb_loss;
        j["k"] = d.k;
        j["I_L"] = d.I_L;
        j["I_E"] = d.I_E;
        j["p_L"] = d.p_L;
        j["assignment"] = d.assignment;
        const std::string s = j.dump(2);
        char* buf = static_cast<char*>(std::malloc(s.size() + 1));
        if (!buf)
            throw std::bad_alloc();
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *result = buf;
    });
}

void rsu_string_free(char* s) { std::free(s); }

rsu_status rsu_snr_gap(double eps, rsu_service service, double* out)
{
    if (!out)
        return fail(RSU_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = risurllc::snr_gap(eps, service == RSU_SERVICE_URLLC ? risurllc::Service::urllc : risurllc::Service::embb);
    });
}

} // extern "C"
