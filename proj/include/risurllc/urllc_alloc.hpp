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

// Mini-slot URLLC admission by puncturing eMBB resource blocks under a fixed
// RIS configuration.
//
// Terminology: a "donor" is an admitted eMBB user whose RBs may be punctured;
// it contributes its per-RB power p_e to the packets placed on those RBs.

#include "risurllc/channel.hpp"
#include "risurllc/config.hpp"

#include <span>
#include <string>
#include <vector>

namespace risurllc
{

enum class Strategy
{
    merl, // minimum eMBB rate loss
    pf    // proportional fairness
};

/// Per-slot eMBB bookkeeping, indexed like EmbbPlan::admitted.
struct MiniSlotState
{
    int m = 1;                         // current mini-slot, 1-based
    std::vector<double> cum_rate;      // sum over past mini-slots of the achieved per-RB rate
    std::vector<double> baseline_rate; // r_e under phi_e with the slot powers
    std::vector<double> r_prime;       // residual per-RB threshold for mini-slot m
    std::vector<std::vector<int>> punctured_so_far; // [mini-slot][user]

    [[nodiscard]] int users() const { return static_cast<int>(baseline_rate.size()); }
};

/// State at m = 1 with empty history.
MiniSlotState initial_state(std::span<const double> baseline_rate, const SystemConfig& cfg);

/// r' = M r_th / b - (cum + (M - m) r_e) per user. Negative values mean the
/// slot average is already secured.
std::vector<double> residual_threshold(const MiniSlotState& state, const SystemConfig& cfg);

/// min(floor(b (1 - r'/r_e)), b), clamped at 0. Requires r_e > 0 unless r' <= 0.
int max_puncturable(double r_prime, double rate, int b);
int max_puncturable(const MiniSlotState& state, int e, const SystemConfig& cfg);

struct StrategyWeights
{
    Strategy strategy = Strategy::pf;
    std::vector<double> beta;
};

/// Largest rate the user may still lose this mini-slot: max(r_e - r', 0).
std::vector<double> max_rate_loss(std::span<const double> rate, std::span<const double> r_prime);

/// MeRL: beta = R/sum R; PF: beta = 1 - R/sum R. Uniform MeRL shares when all R = 0.
StrategyWeights strategy_weights(Strategy strategy, std::span<const double> r_hat);

/// Per-RB power that lets `rbs` RBs carry exactly c_th: (2^(c_th/(rbs W)) - 1) / alpha.
/// Returns +inf when rbs = 0 (or alpha = 0) and c_th > 0.
double power_for_rbs(int rbs, double c_th, double alpha, double W);

struct UrllcPacket
{
    int id = 0;
    int user = 0; // URLLC user index
    double bits = 0.0;
};

struct UrllcBatch
{
    std::vector<UrllcPacket> packets;
    double c_th = 0.0; // bits / tau

    [[nodiscard]] int size() const { return static_cast<int>(packets.size()); }
};

/// Self-contained allocation instance for one mini-slot and one RIS configuration.
struct MiniSlotProblem
{
    struct Donor
    {
        double power = 0.0; // per-RB eMBB power [W]
        int cap = 0;        // puncturable RBs this mini-slot
        double weight = 0.0;
    };
    struct Packet
    {
        int id = 0;
        double alpha = 0.0; // gain / (sigma2 Gamma_URLLC)
    };

    double W = 0.0;
    double c_th = 0.0;
    int b = 0;
    std::vector<Donor> donors;
    std::vector<Packet> packets;

    [[nodiscard]] int donor_count() const { return static_cast<int>(donors.size()); }
    [[nodiscard]] int packet_count() const { return static_cast<int>(packets.size()); }
    /// Per-RB rate of packet l at power p: W log2(1 + alpha p).
    [[nodiscard]] double packet_rate(int l, double p) const;
    void check() const;
};

/// Assemble a problem from slot state and per-configuration channel data.
/// `embb_rate` is r_e under the candidate configuration; `packet_gain` holds one
/// effective gain per packet in the batch.
MiniSlotProblem make_problem(const MiniSlotState& state, const UrllcBatch& batch, const StrategyWeights& weights,
                             std::span<const double> packet_gain, std::span<const double> embb_rate,
                             std::span<const double> embb_power, const SystemConfig& cfg);

struct UrllcDecision
{
    std::vector<int> k;                    // per packet, 0/1
    std::vector<int> I_L;                  // RBs per packet
    std::vector<int> I_E;                  // RBs punctured per donor
    std::vector<std::vector<int>> assignment; // [donor][packet]
    std::vector<double> p_L;               // per-RB power of each packet [W]
    double embb_loss = 0.0;                // sum_e I_E beta_e
    PhaseConfig phi_used;

    [[nodiscard]] int admitted() const;
    /// Zero-puncture decision sized for the problem.
    static UrllcDecision empty(const MiniSlotProblem& problem);
};

/// Relative tolerance on power-budget comparisons.
inline constexpr double power_rel_tol = 1e-12;

struct Admission
{
    std::vector<int> k;
    std::vector<int> I_L;
    std::vector<int> I_E;
};

/// Admission stage of the optimization-based allocator: the relaxed
/// continuous-RB problem picks how many of the strongest packets fit, RB counts
/// are rounded (floor, then largest fractional part) and the weakest packet is
/// dropped until the rounded point is power feasible.
Admission solve_admission(const MiniSlotProblem& problem);

/// Minimum eMBB loss allocation serving exactly the packets with k = 1.
/// Throws std::logic_error when the admitted set cannot be served.
UrllcDecision solve_allocation(const MiniSlotProblem& problem, std::span<const int> k);

/// solve_admission followed by solve_allocation.
UrllcDecision optimize_allocate(const MiniSlotProblem& problem);

/// Greedy allocator: packets by decreasing gain, donors by increasing weight;
/// each packet borrows donor RBs (at donor power) until its rate is met, then
/// transmits at the RB-weighted mean donor power. Packets that cannot be met are dropped.
UrllcDecision heuristic_allocate(const MiniSlotProblem& problem);

struct BruteForceCaps
{
    int max_packets = 4;
    int max_donors = 4;
    int max_rbs = 5;
};

/// Exhaustive lexicographic optimum (most packets, then least loss) on tiny
/// instances. Throws std::invalid_argument above the caps.
UrllcDecision brute_force_allocate(const MiniSlotProblem& problem, const BruteForceCaps& caps = {});

/// Structural checks of a decision; returns one message per violation.
std::vector<std::string> decision_violations(const MiniSlotProblem& problem, const UrllcDecision& decision,
                                             double rel_tol = 1e-9);

} // namespace risurllc
