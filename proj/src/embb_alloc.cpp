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

#include "risurllc/embb_alloc.hpp"

#include "risurllc/phase_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace risurllc
{

double EmbbPlan::sum_rate() const
{
    return static_cast<double>(b) * std::accumulate(rates.begin(), rates.end(), 0.0);
}

double min_power_for_rate(double gain, const SystemConfig& cfg)
{
    if (cfg.r_th == 0.0)
        return 0.0;
    if (!(gain > 0.0))
        return std::numeric_limits<double>::infinity();
    const double noise = snr_gap(cfg.eps_embb, Service::embb) * cfg.sigma2;
    return std::expm1(cfg.embb_rate_floor() / cfg.W * std::numbers::ln2) * noise / gain;
}

double embb_rate(double gain, double power, const SystemConfig& cfg)
{
    return rate_per_rb(gain, power, cfg.W, snr_gap(cfg.eps_embb, Service::embb), cfg.sigma2);
}

std::optional<std::vector<double>> allocate_power(std::span<const double> gains, const SystemConfig& cfg)
{
    const std::size_t n = gains.size();
    const double b = cfg.rbs_per_user();
    const double noise = snr_gap(cfg.eps_embb, Service::embb) * cfg.sigma2;
    const double budget = cfg.P_BS / b; // sum of per-RB powers

    std::vector<double> pmin(n), inv(n);
    double floor_total = 0.0;
    for (std::size_t e = 0; e < n; ++e)
    {
        if (gains[e] < 0.0 || !std::isfinite(gains[e]))
            throw std::invalid_argument("allocate_power: gains must be finite and >= 0");
        pmin[e] = min_power_for_rate(gains[e], cfg);
        inv[e] = gains[e] > 0.0 ? noise / gains[e] : std::numeric_limits<double>::infinity();
        floor_total += pmin[e];
    }
    if (!(floor_total <= budget))
        return std::nullopt;

    // p_e = max(pmin_e, mu - inv_e): user e is above its floor once mu > pmin_e + inv_e.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> knee(n);
    for (std::size_t e = 0; e < n; ++e)
        knee[e] = pmin[e] + inv[e];
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return knee[a] < knee[c]; });

    std::vector<double> p = pmin;
    double rest_floor = floor_total;
    double inv_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        const std::size_t e = order[k];
        if (!std::isfinite(knee[e]))
            break;
        rest_floor -= pmin[e];
        inv_sum += inv[e];
        const double mu = (budget - rest_floor + inv_sum) / static_cast<double>(k + 1);
        const double next = k + 1 < n ? knee[order[k + 1]] : std::numeric_limits<double>::infinity();
        if (mu <= next)
        {
            for (std::size_t i = 0; i <= k; ++i)
                p[order[i]] = std::max(pmin[order[i]], mu - inv[order[i]]);
            break;
        }
    }
    return p;
}

namespace
{

std::vector<double> gains_for(const ChannelRealization& ch, std::span<const int> users, const PhaseConfig& phi)
{
    std::vector<double> g;
    g.reserve(users.size());
    for (int e : users)
        g.push_back(ch.embb_gain(e, phi));
    return g;
}

double plan_sum_rate(std::span<const double> gains, std::span<const double> powers, const SystemConfig& cfg)
{
    double total = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i)
        total += embb_rate(gains[i], powers[i], cfg);
    return total * cfg.rbs_per_user();
}

} // namespace

std::optional<EmbbPlan> optimize_fixed_set(const ChannelRealization& ch, const SystemConfig& cfg,
                                           std::span<const int> users, Rng& rng, const AoOptions& options)
{
    const int n = ch.ris_elements();
    EmbbPlan plan;
    plan.b = cfg.rbs_per_user();
    plan.admitted.assign(users.begin(), users.end());
    if (users.empty())
    {
        plan.phi_e = PhaseConfig::zeros(n);
        plan.history.push_back(0.0);
        return plan;
    }

    std::vector<LiftedChannel> lifted;
    lifted.reserve(users.size());
    for (int e : users)
    {
        const auto i = static_cast<std::size_t>(e);
        lifted.push_back(lift(ch.h_ris_e.at(i), ch.f_bs_ris, ch.h_bs_e.at(i)));
    }

    PhaseConfig phi = PhaseConfig::zeros(n);
    std::vector<double> gains = gains_for(ch, users, phi);
    auto powers = allocate_power(gains, cfg);

    if (!powers && n > 0)
    {
        // Floors fail at zero phases: start from the configuration that minimizes
        // the total floor power sum_e 1/g_e, seeded by the max-min relaxation.
        const SdpSolution mm = solve_minmax_sdp(lifted);
        auto floor_cost = [&](const PhaseConfig& cand) {
            double s = 0.0;
            for (int e : users)
                s += 1.0 / std::max(ch.embb_gain(e, cand), std::numeric_limits<double>::min());
            return -s;
        };
        phi = gaussian_randomize(mm, floor_cost, cfg.randomization_trials, rng).phases;
        gains = gains_for(ch, users, phi);
        powers = allocate_power(gains, cfg);
    }
    if (!powers)
        return std::nullopt;

    double objective = plan_sum_rate(gains, *powers, cfg);
    plan.history.push_back(objective);

    if (n > 0)
    {
        const double noise = snr_gap(cfg.eps_embb, Service::embb) * cfg.sigma2;
        const double floor_snr = cfg.r_th > 0.0 ? std::exp2(cfg.embb_rate_floor() / cfg.W) - 1.0 : 0.0;
        for (int it = 0; it < options.max_iterations; ++it)
        {
            const SdpSolution sol = solve_sumrate_sdp(lifted, *powers, cfg);
            if (sol.status == SdpStatus::infeasible)
                break;
            const std::vector<double>& p = *powers;
            // Candidates meeting every floor rank by sum rate; the rest by total shortfall.
            auto score = [&](const PhaseConfig& cand) {
                const Eigen::VectorXcd v = lifted_from_phases(cand);
                double se = 0.0, shortfall = 0.0;
                for (std::size_t e = 0; e < lifted.size(); ++e)
                {
                    const double snr = p[e] * std::norm(lifted[e].coupling.dot(v)) / noise;
                    se += std::log2(1.0 + snr);
                    if (snr < floor_snr)
                        shortfall += (floor_snr - snr) / floor_snr;
                }
                return shortfall > 0.0 ? -shortfall : se;
            };
            const RandomizedPhases cand = gaussian_randomize(sol, score, cfg.randomization_trials, rng);
            std::vector<double> next_gains = gains_for(ch, users, cand.phases);
            auto next_powers = allocate_power(next_gains, cfg);
            if (!next_powers)
                break;
            const double next_obj = plan_sum_rate(next_gains, *next_powers, cfg);
            if (next_obj < objective)
                break;
            const double gain_rel = objective > 0.0 ? (next_obj - objective) / objective : 1.0;
            phi = cand.phases;
            gains = std::move(next_gains);
            powers = std::move(next_powers);
            objective = next_obj;
            plan.history.push_back(objective);
            if (gain_rel < options.rel_tol)
                break;
        }
    }

    plan.phi_e = phi;
    plan.powers = *powers;
    plan.rates.resize(users.size());
    for (std::size_t i = 0; i < users.size(); ++i)
        plan.rates[i] = embb_rate(gains[i], plan.powers[i], cfg);
    return plan;
}

EmbbPlan alternating_optimize(const ChannelRealization& ch, const SystemConfig& cfg, Rng& rng,
                              const AoOptions& options)
{
    std::vector<int> users(ch.h_bs_e.size());
    std::iota(users.begin(), users.end(), 0);
    while (true)
    {
        if (auto plan = optimize_fixed_set(ch, cfg, users, rng, options))
            return *plan;
        SystemConfig relaxed = cfg;
        relaxed.r_th = 0.0;
        const auto loose = optimize_fixed_set(ch, relaxed, users, rng, options);
        std::size_t drop = 0;
        for (std::size_t i = 1; i < users.size(); ++i)
            if (loose->rates[i] < loose->rates[drop])
                drop = i;
        users.erase(users.begin() + static_cast<std::ptrdiff_t>(drop));
    }
}

} // namespace risurllc
