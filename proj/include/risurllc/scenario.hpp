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

// Scenario files and parameter sweeps.
//
// A scenario is a flat key = value text file ('#' starts a comment). Keys under
// `base.` set system parameters, exactly one `sweep.` key lists the swept values,
// and the remaining keys control the run. See docs/scenario-format.md.

#include "risurllc/config.hpp"
#include "risurllc/sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace risurllc
{

/// Malformed or out-of-range scenario content.
class ScenarioError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

enum class SweepVar
{
    ris_elements,
    bs_power,        // dBm
    delta,
    bs_ris_distance, // m
    urllc_users
};

std::string_view to_string(SweepVar v);

struct Scenario
{
    SystemConfig base;
    SweepVar sweep_var = SweepVar::ris_elements;
    std::vector<double> sweep_values;
    int trials = 200;
    std::uint64_t seed = 1;
    int threads = 1;
    bool timing = false;
    std::vector<SchemeId> schemes{SchemeId::no_ris, SchemeId::scheme1, SchemeId::scheme2, SchemeId::scheme3,
                                  SchemeId::selected};
    std::vector<Strategy> strategies{Strategy::pf};
    std::vector<Allocator> allocators{Allocator::heuristic};

    /// Every (scheme, strategy, allocator) combination, in row order.
    [[nodiscard]] std::vector<Variant> variants() const;
};

/// Throws ScenarioError on syntax or range errors.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

/// base with the swept parameter set to `value`.
SystemConfig apply_sweep(const SystemConfig& base, SweepVar var, double value);

/// Checks every sweep point: ScenarioError for bad values, InfeasibleConfig for
/// unusable systems.
void validate(const Scenario& s);

struct SweepRow
{
    SweepVar var;
    double value = 0.0;
    Metrics metrics;
};

/// Rows sorted by sweep value, then in variant order.
std::vector<SweepRow> run_sweep(const Scenario& s);

inline constexpr std::string_view csv_header =
    "sweep_var,sweep_value,scheme,strategy,allocator,eta,eta_se,sum_rate_bps,sum_rate_se,embb_admission,"
    "runtime_ms_mean,runtime_ms_p95,trials,seed";

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, std::uint64_t seed);

} // namespace risurllc
