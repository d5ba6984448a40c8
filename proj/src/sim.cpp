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


#include "risurllc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace risurllc
{

std::string_view to_string(SchemeId s)
{
    switch (s)
    {
    case SchemeId::no_ris: return "no_ris";
    case SchemeId::scheme1: return "scheme1";
    case SchemeId::scheme2: return "scheme2";
    case SchemeId::scheme3: return "scheme3";
    case SchemeId::selected: return "selected";
    }
    return "?";
}

namespace
{

Scheme scheduler_scheme(SchemeId s)
{
    switch (s)
    {
    case SchemeId::no_ris:
    case SchemeId::scheme1: return Scheme::scheme1;
    case SchemeId::scheme2: return Scheme::scheme2;
    case SchemeId::scheme3: return Scheme::scheme3;
    case SchemeId::selected: return Scheme::selected;
    }
    return Scheme::scheme1;
}

TrialCounts run_slot(const SlotPlan& plan, std::span<const UrllcBatch> batches, const Variant& v,
                     const SystemConfig& cfg, const TrialOptions& options)
{
    TrialCounts out;
    out.embb_users = cfg.E;
    out.embb_admitted = static_cast<int>(plan.embb.admitted.size());
    MiniSlotState state = initial_state(plan.embb.rates, cfg);
    const Scheme scheme = scheduler_scheme(v.scheme);
    for (const UrllcBatch& batch : batches)
    {
        const auto start = std::chrono::steady_clock::now();
        const UrllcDecision d = allocate_mini_slot(plan, state, batch, v.strategy, v.allocator, scheme, cfg);
        if (options.timing && !batch.packets.empty())
            out.runtime_ms.push_back(
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
        out.arrived += batch.size();
        out.admitted += d.admitted();
        state = advance_state(state, d, plan, cfg);
    }
    const int b = cfg.rbs_per_user();
    const double floor = cfg.r_th / b;
    out.worst_qos_ratio = std::numeric_limits<double>::infinity();
    for (double cum : state.cum_rate)
    {
        const double avg = cum / cfg.M;
        out.sum_rate += b * avg;
        if (floor > 0.0)
            out.worst_qos_ratio = std::min(out.worst_qos_ratio, avg / floor);
    }
    return out;
}

} // namespace

std::vector<TrialCounts> run_trial(const SystemConfig& cfg, std::span<const Variant> variants,
                                   std::uint64_t master_seed, std::uint64_t trial, const TrialOptions& options)
{
    const bool need_ris = std::any_of(variants.begin(), variants.end(),
                                      [](const Variant& v) { return v.scheme != SchemeId::no_ris; });
    const bool need_bare = std::any_of(variants.begin(), variants.end(),
                                       [](const Variant& v) { return v.scheme == SchemeId::no_ris; });

    TrialStreams streams = TrialStreams::derive(master_seed, trial);
    std::optional<SlotPlan> plan, bare;
    if (need_ris)
    {
        const ChannelRealization ch = sample_channels(cfg, streams.placement, streams.ris_links);
        plan = begin_slot(ch, cfg, streams.randomization);
    }
    if (need_bare)
    {
        // Same drop with the surface removed: the placement stream (positions and
        // direct links) does not depend on N.
        TrialStreams s = TrialStreams::derive(master_seed, trial);
        SystemConfig bare_cfg = cfg;
        bare_cfg.N = 0;
        const ChannelRealization ch = sample_channels(bare_cfg, s.placement, s.ris_links);
        bare = begin_slot(ch, bare_cfg, s.randomization);
    }

    std::vector<UrllcBatch> batches;
    int next_id = 0;
    for (int m = 0; m < cfg.M; ++m)
    {
        batches.push_back(sample_arrivals(cfg, cfg.U, streams.arrivals, next_id));
        next_id += batches.back().size();
    }

    std::vector<TrialCounts> out;
    out.reserve(variants.size());
    for (const Variant& v : variants)
        out.push_back(run_slot(v.scheme == SchemeId::no_ris ? *bare : *plan, batches, v, cfg, options));
    return out;
}

Metrics aggregate(const Variant& v, std::span<const TrialCounts> trials, bool timing)
{
    Metrics m;
    m.variant = v;
    m.trials = static_cast<int>(trials.size());
    m.worst_qos_ratio = std::numeric_limits<double>::infinity();
    const double k = static_cast<double>(trials.size());
    if (trials.empty())
        throw std::invalid_argument("aggregate: no trials");

    std::vector<double> runtimes;
    double rate_sum = 0.0, embb = 0.0;
    for (const auto& t : trials)
    {
        m.arrived += t.arrived;
        m.admitted += t.admitted;
        rate_sum += t.sum_rate;
        embb += t.embb_users > 0 ? static_cast<double>(t.embb_admitted) / t.embb_users : 0.0;
        m.worst_qos_ratio = std::min(m.worst_qos_ratio, t.worst_qos_ratio);
        runtimes.insert(runtimes.end(), t.runtime_ms.begin(), t.runtime_ms.end());
    }
    m.sum_rate = rate_sum / k;
    m.embb_admission = embb / k;

    if (m.arrived > 0)
    {
        m.eta = static_cast<double>(m.admitted) / static_cast<double>(m.arrived);
        // Ratio-estimator standard error over trials.
        if (trials.size() > 1)
        {
            double ss = 0.0;
            for (const auto& t : trials)
            {
                const double r = static_cast<double>(t.admitted) - m.eta * static_cast<double>(t.arrived);
                ss += r * r;
            }
            const double mean_arrived = static_cast<double>(m.arrived) / k;
            m.eta_se = std::sqrt(ss / (k * (k - 1.0))) / mean_arrived;
        }
    }
    if (trials.size() > 1)
    {
        double ss = 0.0;
        for (const auto& t : trials)
            ss += (t.sum_rate - m.sum_rate) * (t.sum_rate - m.sum_rate);
        m.sum_rate_se = std::sqrt(ss / (k - 1.0) / k);
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.runtime_ms_mean = nan;
    m.runtime_ms_p95 = nan;
    if (timing && !runtimes.empty())
    {
        double s = 0.0;
        for (double r : runtimes)
            s += r;
        m.runtime_ms_mean = s / static_cast<double>(runtimes.size());
        std::sort(runtimes.begin(), runtimes.end());
        const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(runtimes.size())));
        m.runtime_ms_p95 = runtimes[std::max<std::size_t>(rank, 1) - 1];
    }
    return m;
}

std::vector<Metrics> run_point(const SystemConfig& cfg, std::span<const Variant> variants, int trials,
                               std::uint64_t seed, int threads, const TrialOptions& options)
{
    if (trials < 1)
        throw std::invalid_argument("run_point: trials must be >= 1");
    validate(cfg);
    std::vector<std::vector<TrialCounts>> results(static_cast<std::size_t>(trials));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (int t = next++; t < trials; t = next++)
        {
            try
            {
                results[static_cast<std::size_t>(t)] =
                    run_trial(cfg, variants, seed, static_cast<std::uint64_t>(t), options);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = trials;
            }
        }
    };
    const int n = std::clamp(threads, 1, trials);
    if (n == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (int i = 0; i < n; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    std::vector<Metrics> out;
    std::vector<TrialCounts> column(static_cast<std::size_t>(trials));
    for (std::size_t v = 0; v < variants.size(); ++v)
    {
        for (std::size_t t = 0; t < column.size(); ++t)
            column[t] = std::move(results[t][v]);
        out.push_back(aggregate(variants[v], column, options.timing));
    }
    return out;
}

} // namespace risurllc
