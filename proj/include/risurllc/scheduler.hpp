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

// One time slot: three RIS configurations prepared at slot start, then a
// per-mini-slot choice among them while URLLC packets puncture eMBB RBs.

#include "risurllc/channel.hpp"
#include "risurllc/config.hpp"
#include "risurllc/embb_alloc.hpp"
#include "risurllc/urllc_alloc.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace risurllc
{

enum class Candidate
{
    phi_e = 0,  // eMBB sum-rate design
    phi_u = 1,  // max-min URLLC gain
    phi_eu = 2  // max-min gain over all coexisting users
};
inline constexpr int candidate_count = 3;

/// Which candidates a mini-slot may use.
enum class Scheme
{
    scheme1,  // always phi_e
    scheme2,  // phi_u whenever packets arrive
    scheme3,  // phi_eu whenever packets arrive
    selected  // best of the three per mini-slot
};

enum class Allocator
{
    optimization,
    heuristic
};

/// Channel data of every user under one candidate configuration.
struct CandidateView
{
    PhaseConfig phi;
    std::vector<double> embb_gain;  // admitted eMBB users, plan order
    std::vector<double> embb_rate;  // per-RB rate with the plan powers
    std::vector<double> urllc_gain; // all URLLC users
};

struct SlotPlan
{
    EmbbPlan embb;
    PhaseConfig phi_u;
    PhaseConfig phi_eu;
    std::array<CandidateView, candidate_count> views;

    [[nodiscard]] const CandidateView& view(Candidate c) const { return views[static_cast<std::size_t>(c)]; }
};

/// Runs the eMBB allocation and both max-min designs.
SlotPlan begin_slot(const ChannelRealization& ch, const SystemConfig& cfg, Rng& rng);

/// Assembles a plan from given configurations (used by begin_slot and tests).
SlotPlan make_plan(const ChannelRealization& ch, const SystemConfig& cfg, EmbbPlan embb, PhaseConfig phi_u,
                   PhaseConfig phi_eu);

/// A candidate may be used only if every admitted eMBB user still reaches its
/// residual threshold under it: r_e(phi) >= r'_e. phi_e always qualifies.
bool eligible(const SlotPlan& plan, const MiniSlotState& state, Candidate c);

/// Allocation of one batch under one fixed candidate.
UrllcDecision allocate_with(const SlotPlan& plan, const MiniSlotState& state, const UrllcBatch& batch,
                            Candidate c, Strategy strategy, Allocator allocator, const SystemConfig& cfg);

struct SelectionTrace
{
    Candidate chosen = Candidate::phi_e;
    std::array<int, candidate_count> admitted{-1, -1, -1}; // -1: not evaluated
    std::array<double, candidate_count> loss{};
};

/// Per-mini-slot allocation. `selected` keeps the candidate admitting most
/// packets, then the smallest eMBB loss, then the earliest of phi_e, phi_u,
/// phi_eu. Empty batches keep phi_e with no punctures.
UrllcDecision allocate_mini_slot(const SlotPlan& plan, const MiniSlotState& state, const UrllcBatch& batch,
                                 Strategy strategy, Allocator allocator, Scheme scheme, const SystemConfig& cfg,
                                 SelectionTrace* trace = nullptr);

/// Applies a decision: cum += (1 - I_E/b) r_e(phi_used), m += 1, r' refreshed.
/// Throws std::out_of_range when the slot is already complete.
MiniSlotState advance_state(const MiniSlotState& state, const UrllcDecision& decision, const SlotPlan& plan,
                            const SystemConfig& cfg);

/// True once all M mini-slots have been applied.
bool slot_complete(const MiniSlotState& state, const SystemConfig& cfg);

std::string_view to_string(Scheme s);
std::string_view to_string(Strategy s);
std::string_view to_string(Allocator a);

} // namespace risurllc
