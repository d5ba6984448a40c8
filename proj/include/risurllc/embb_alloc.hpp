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

// Time-slot eMBB allocation: water-filling power with per-user rate floors,
// alternated with sum-rate RIS phase design, plus admission pruning.

#include "risurllc/channel.hpp"
#include "risurllc/config.hpp"

#include <optional>
#include <span>
#include <vector>

namespace risurllc
{

struct EmbbPlan
{
    std::vector<int> admitted;  // eMBB user indices, ascending
    std::vector<double> powers; // per-RB power of each admitted user [W]
    std::vector<double> rates;  // per-RB rate under phi_e [bit/s]
    PhaseConfig phi_e;
    int b = 0;
    /// Sum rate recorded after each accepted AO step (first entry: initial point).
    std::vector<double> history;

    /// sum_e b r_e [bit/s].
    [[nodiscard]] double sum_rate() const;
};

/// Smallest per-RB power meeting the floor r_th / ((1 - delta) b) at this gain.
/// Returns +inf when gain = 0 and r_th > 0.
double min_power_for_rate(double gain, const SystemConfig& cfg);

/// Water-filling over per-RB powers with sum_e b p_e = P_BS and p_e >= p_min(e).
/// Returns nullopt when the floors alone exceed the budget.
std::optional<std::vector<double>> allocate_power(std::span<const double> gains, const SystemConfig& cfg);

/// Per-RB eMBB rate for a gain and power under cfg.
double embb_rate(double gain, double power, const SystemConfig& cfg);

struct AoOptions
{
    double rel_tol = 1e-4;
    int max_iterations = 20;
};

/// Alternating power / phase optimization with admission pruning. Users are
/// dropped one at a time (smallest b r_e of the unconstrained solution, lowest
/// index on ties) until the remaining set is feasible; the set may end empty.
EmbbPlan alternating_optimize(const ChannelRealization& ch, const SystemConfig& cfg, Rng& rng,
                              const AoOptions& options = {});

/// One AO run on a fixed user set. Returns nullopt when the rate floors cannot
/// be met even after the feasibility fallback.
std::optional<EmbbPlan> optimize_fixed_set(const ChannelRealization& ch, const SystemConfig& cfg,
                                           std::span<const int> users, Rng& rng, const AoOptions& options = {});

} // namespace risurllc
