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


// Command-line front end over the C interface.

#include "risurllc/risurllc.h"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>

namespace
{

// Exit codes: 0 ok, 2 validation error, 3 infeasible configuration, 1 anything else.
int exit_code(rsu_status s)
{
    switch (s)
    {
    case RSU_OK: return 0;
    case RSU_VALIDATION_ERROR: return 2;
    case RSU_INFEASIBLE: return 3;
    default: return 1;
    }
}

int report(rsu_status s)
{
    if (s != RSU_OK)
        std::fprintf(stderr, "error: %s\n", rsu_last_error());
    return exit_code(s);
}

struct ScenarioHandle
{
    rsu_scenario* p = nullptr;
    ~ScenarioHandle() { rsu_scenario_free(p); }
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"RIS-aided eMBB/URLLC puncturing simulator"};
    app.set_version_flag("--version", std::string(rsu_version()));
    app.require_subcommand(1);

    std::string scenario_path, out_path, instance_path;
    std::optional<int> trials, threads;
    std::optional<std::uint64_t> seed;

    auto* simulate = app.add_subcommand("simulate", "Run a scenario sweep and write a CSV table");
    simulate->add_option("--scenario", scenario_path, "Scenario file")->required();
    simulate->add_option("--out", out_path, "Output CSV path")->required();
    simulate->add_option("--trials", trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "Master seed");
    simulate->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
    validate->add_option("--scenario", scenario_path, "Scenario file")->required();

    auto* oracle = app.add_subcommand("oracle", "Solve a tiny allocation instance exhaustively");
    oracle->add_option("--instance", instance_path, "Instance file (JSON)")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e);
    }

    if (*oracle)
    {
        char* result = nullptr;
        const rsu_status s = rsu_oracle_solve(instance_path.c_str(), &result);
        if (s == RSU_OK)
        {
            std::printf("%s\n", result);
            rsu_string_free(result);
        }
        return report(s);
    }

    ScenarioHandle h;
    if (const rsu_status s = rsu_scenario_load(scenario_path.c_str(), &h.p); s != RSU_OK)
        return report(s);

    if (*validate)
    {
        const rsu_status s = rsu_scenario_validate(h.p);
        if (s == RSU_OK)
            std::printf("ok\n");
        return report(s);
    }

    if (trials)
        if (const rsu_status s = rsu_scenario_set_trials(h.p, *trials); s != RSU_OK)
            return report(s);
    if (seed)
        if (const rsu_status s = rsu_scenario_set_seed(h.p, *seed); s != RSU_OK)
            return report(s);
    if (threads)
        if (const rsu_status s = rsu_scenario_set_threads(h.p, *threads); s != RSU_OK)
            return report(s);
    return report(rsu_run_sweep(h.p, out_path.c_str()));
}
