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


#include "risurllc/scheduler.hpp"

#include "risurllc/phase_opt.hpp"

#include <stdexcept>

namespace risurllc
{

namespace
{

std::vector<LiftedChannel> lift_users(const std::vector<cplx>& direct, const std::vector<std::vector<cplx>>& ris,
                                      const std::vector<cplx>& f, std::span<const int> users)
{
    std::vector<LiftedChannel> out;
    out.reserve(users.size());
    for (int u : users)
        out.push_back(lift(ris.at(static_cast<std::size_t>(u)), f, direct.at(static_cast<std::size_t>(u))));
    return out;
}

PhaseConfig maxmin_phases(std::span<const LiftedChannel> lifted, const SystemConfig& cfg, Rng& rng)
{
    const SdpSolution sol = solve_minmax_sdp(lifted);
    auto objective = [&](const PhaseConfig& phi) { return min_gain(lifted, phi); };
    return gaussian_randomize(sol, objective, cfg.randomization_trials, rng).phases;
}

} // namespace

SlotPlan make_plan(const ChannelRealization& ch, const SystemConfig& cfg, EmbbPlan embb, PhaseConfig phi_u,
                   PhaseConfig phi_eu)
{
    SlotPlan plan;
    plan.embb = std::move(embb);
    plan.phi_u = std::move(phi_u);
    plan.phi_eu = std::move(phi_eu);
    const std::array<const PhaseConfig*, candidate_count> phis{&plan.embb.phi_e, &plan.phi_u, &plan.phi_eu};
    for (int c = 0; c < candidate_count; ++c)
    {
        CandidateView& v = plan.views[static_cast<std::size_t>(c)];
        v.phi = *phis[static_cast<std::size_t>(c)];
        if (v.phi.size() != ch.ris_elements())
            throw std::invalid_argument("make_plan: phase configuration does not match the RIS size");
        for (std::size_t i = 0; i < plan.embb.admitted.size(); ++i)
        {
            const double g = ch.embb_gain(plan.embb.admitted[i], v.phi);
            v.embb_gain.push_back(g);
            v.embb_rate.push_back(embb_rate(g, plan.embb.powers[i], cfg));
        }
        for (int u = 0; u < static_cast<int>(ch.g_bs_u.size()); ++u)
            v.urllc_gain.push_back(ch.urllc_gain(u, v.phi));
    }
    return plan;
}

SlotPlan begin_slot(const ChannelRealization& ch, const SystemConfig& cfg, Rng& rng)
{
    EmbbPlan embb = alternating_optimize(ch, cfg, rng);
    const int n = ch.ris_elements();
    if (n == 0)
        return make_plan(ch, cfg, std::move(embb), PhaseConfig(), PhaseConfig());

    std::vector<int> urllc(ch.g_bs_u.size());
    for (std::size_t u = 0; u < urllc.size(); ++u)
        urllc[u] = static_cast<int>(u);
    const auto lifted_u = lift_users(ch.g_bs_u, ch.g_ris_u, ch.f_bs_ris, urllc);
    auto lifted_all = lift_users(ch.h_bs_e, ch.h_ris_e, ch.f_bs_ris, embb.admitted);
    lifted_all.insert(lifted_all.end(), lifted_u.begin(), lifted_u.end());

    PhaseConfig phi_u = lifted_u.empty() ? embb.phi_e : maxmin_phases(lifted_u, cfg, rng);
    PhaseConfig phi_eu = lifted_all.empty() ? embb.phi_e : maxmin_phases(lifted_all, cfg, rng);
    return make_plan(ch, cfg, std::move(embb), std::move(phi_u), std::move(phi_eu));
}

bool eligible(const SlotPlan& plan, const MiniSlotState& state, Candidate c)
{
    if (c == Candidate::phi_e)
        return true;
    const auto& rate = plan.view(c).embb_rate;
    for (std::size_t e = 0; e < rate.size(); ++e)
        if (rate[e] < state.r_prime.at(e))
            return false;
    return true;
}

UrllcDecision allocate_with(const SlotPlan& plan, const MiniSlotState& state, const UrllcBatch& batch, Candidate c,
                            Strategy strategy, Allocator allocator, const SystemConfig& cfg)
{
    const CandidateView& v = plan.view(c);
    const StrategyWeights w = strategy_weights(strategy, max_rate_loss(v.embb_rate, state.r_prime));
    std::vector<double> gains;
    gains.reserve(batch.packets.size());
    for (const auto& pk : batch.packets)
        gains.push_back(v.urllc_gain.at(static_cast<std::size_t>(pk.user)));
    const MiniSlotProblem problem = make_problem(state, batch, w, gains, v.embb_rate, plan.embb.powers, cfg);
    UrllcDecision d = allocator == Allocator::heuristic ? heuristic_allocate(problem) : optimize_allocate(problem);
    d.phi_used = v.phi;
    return d;
}

UrllcDecision allocate_mini_slot(const SlotPlan& plan, const MiniSlotState& state, const UrllcBatch& batch,
                                 Strategy strategy, Allocator allocator, Scheme scheme, const SystemConfig& cfg,
                                 SelectionTrace* trace)
{
    if (state.m < 1 || state.m > cfg.M)
        throw std::out_of_range("allocate_mini_slot: mini-slot index out of range");
    SelectionTrace local;
    SelectionTrace& tr = trace ? *trace : local;
    tr = SelectionTrace{};

    std::vector<Candidate> pool;
    if (batch.packets.empty() || scheme == Scheme::scheme1)
        pool = {Candidate::phi_e};
    else if (scheme == Scheme::scheme2)
        pool = {eligible(plan, state, Candidate::phi_u) ? Candidate::phi_u : Candidate::phi_e};
    else if (scheme == Scheme::scheme3)
        pool = {eligible(plan, state, Candidate::phi_eu) ? Candidate::phi_eu : Candidate::phi_e};
    else
        for (Candidate c : {Candidate::phi_e, Candidate::phi_u, Candidate::phi_eu})
            if (eligible(plan, state, c))
                pool.push_back(c);

    UrllcDecision best;
    bool have = false;
    for (Candidate c : pool)
    {
        UrllcDecision d = allocate_with(plan, state, batch, c, strategy, allocator, cfg);
        const auto i = static_cast<std::size_t>(c);
        tr.admitted[i] = d.admitted();
        tr.loss[i] = d.embb_loss;
        const bool better = !have || d.admitted() > best.admitted() ||
                            (d.admitted() == best.admitted() && d.embb_loss < best.embb_loss);
        if (better)
        {
            best = std::move(d);
            tr.chosen = c;
            have = true;
        }
    }
    return best;
}

MiniSlotState advance_state(const MiniSlotState& state, const UrllcDecision& decision, const SlotPlan& plan,
                            const SystemConfig& cfg)
{
    if (state.m < 1 || state.m > cfg.M)
        throw std::out_of_range("advance_state: slot already complete");
    const CandidateView* used = nullptr;
    for (const auto& v : plan.views)
        if (v.phi == decision.phi_used)
        {
            used = &v;
            break;
        }
    if (!used)
        throw std::invalid_argument("advance_state: decision uses an unknown configuration");
    const int b = cfg.rbs_per_user();
    const std::size_t n = state.baseline_rate.size();
    if (decision.I_E.size() != n)
        throw std::invalid_argument("advance_state: decision does not match the state");

    MiniSlotState next = state;
    for (std::size_t e = 0; e < n; ++e)
        next.cum_rate[e] += (1.0 - static_cast<double>(decision.I_E[e]) / b) * used->embb_rate[e];
    next.punctured_so_far.push_back(decision.I_E);
    next.m = state.m + 1;
    if (next.m <= cfg.M)
        next.r_prime = residual_threshold(next, cfg);
    else
        next.r_prime.assign(n, 0.0);
    return next;
}

bool slot_complete(const MiniSlotState& state, const SystemConfig& cfg) { return state.m > cfg.M; }

std::string_view to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::scheme1: return "scheme1";
    case Scheme::scheme2: return "scheme2";
    case Scheme::scheme3: return "scheme3";
    case Scheme::selected: return "selected";
    }
    return "?";
}

std::string_view to_string(Strategy s) { return s == Strategy::merl ? "merl" : "pf"; }

std::string_view to_string(Allocator a) { return a == Allocator::heuristic ? "heuristic" : "optimization"; }

} // namespace risurllc
