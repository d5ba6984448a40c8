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


// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include "risurllc/channel.hpp"
#include "risurllc/phase_opt.hpp"
#include "risurllc/scheduler.hpp"
#include "risurllc/sim.hpp"
#include "risurllc/urllc_alloc.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

using namespace risurllc;
using Clock = std::chrono::steady_clock;

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;

int failures = 0;
std::vector<std::pair<int, std::string>> summary;

void report(int id, bool ok, const std::string& what, const std::string& detail)
{
    std::printf("%s  [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    summary.emplace_back(id, std::string(ok ? "PASS" : "FAIL") + "  [" + std::to_string(id) + "] " + what);
    if (!ok)
        ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int worker_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// Problem the scheduler would hand to the allocator for candidate c.
MiniSlotProblem problem_for(const SlotPlan& plan, const MiniSlotState& state, const UrllcBatch& batch, Candidate c,
                            Strategy strategy, const SystemConfig& cfg)
{
    const CandidateView& v = plan.view(c);
    const StrategyWeights w = strategy_weights(strategy, max_rate_loss(v.embb_rate, state.r_prime));
    std::vector<double> gains;
    for (const auto& pk : batch.packets)
        gains.push_back(v.urllc_gain.at(static_cast<std::size_t>(pk.user)));
    return make_problem(state, batch, w, gains, v.embb_rate, plan.embb.powers, cfg);
}

// ---------------------------------------------------------------- 1
void oracle_equivalence()
{
    const auto t0 = Clock::now();
    Rng rng(20240101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int total = 500;
    int match = 0, exceed_opt = 0, exceed_heu = 0, nontrivial = 0;
    for (int i = 0; i < total; ++i)
    {
        SystemConfig cfg;
        cfg.E = 1 + static_cast<int>(rng() % 3);
        const int b = 1 + static_cast<int>(rng() % 4);
        cfg.B = b * cfg.E;
        cfg.U = 3;
        cfg.N = static_cast<int>(rng() % 3);
        cfg.r_th = 2e6 * u(rng) * b / 12.0;
        cfg.packet_bits = 32.0 * (1 << (rng() % 4));
        cfg.randomization_trials = 50;
        Rng slot_rng(rng());
        const SlotPlan plan = begin_slot(sample_channels(cfg, rng()), cfg, slot_rng);

        MiniSlotState state = initial_state(plan.embb.rates, cfg);
        state.m = 1 + static_cast<int>(rng() % cfg.M);
        for (std::size_t e = 0; e < state.cum_rate.size(); ++e)
            for (int past = 1; past < state.m; ++past)
                state.cum_rate[e] += (1.0 - static_cast<double>(rng() % (b + 1)) / b * u(rng)) * plan.embb.rates[e];
        state.r_prime = residual_threshold(state, cfg);

        UrllcBatch batch;
        batch.c_th = cfg.c_th();
        const int L = 1 + static_cast<int>(rng() % 3);
        for (int l = 0; l < L; ++l)
            batch.packets.push_back({l, static_cast<int>(rng() % 3), cfg.packet_bits});
        const auto c = static_cast<Candidate>(rng() % 3);
        const Strategy strategy = rng() % 2 ? Strategy::pf : Strategy::merl;
        const MiniSlotProblem p = problem_for(plan, state, batch, c, strategy, cfg);

        const int bf = brute_force_allocate(p).admitted();
        const int opt = optimize_allocate(p).admitted();
        const int heu = heuristic_allocate(p).admitted();
        nontrivial += bf > 0;
        match += opt == bf;
        exceed_opt += opt > bf;
        exceed_heu += heu > bf;
    }
    const double secs = seconds_since(t0);
    const bool ok = match >= total * 95 / 100 && exceed_opt == 0 && exceed_heu == 0 && secs < 60.0;
    report(1, ok, "oracle equivalence",
           fmt("%d/%d match, %d/%d with admissions, exceed opt=%d heur=%d, %.1f s", match, total, nontrivial, total,
               exceed_opt, exceed_heu, secs));
}

// ---------------------------------------------------------------- 2
void invariant_suite()
{
    const auto t0 = Clock::now();
    Rng rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    long slots = 0, decisions = 0, violations = 0, plans = 0, sdps = 0;
    const double tol = 1e-9;
    std::string first;
    auto violation = [&](const std::string& msg) {
        if (first.empty())
            first = msg;
        ++violations;
    };

    for (int drop = 0; drop < 100; ++drop)
    {
        SystemConfig cfg;
        cfg.E = 2 + static_cast<int>(rng() % 7);
        cfg.B = 12 * cfg.E;
        cfg.N = std::array<int, 4>{0, 2, 4, 8}[rng() % 4];
        cfg.U = 5 + static_cast<int>(rng() % 36);
        cfg.lambda = 0.05 + 0.5 * u(rng);
        cfg.randomization_trials = 100;
        const ChannelRealization ch = sample_channels(cfg, rng());
        Rng slot_rng(rng());
        const SlotPlan plan = begin_slot(ch, cfg, slot_rng);
        const int b = cfg.rbs_per_user();

        // eMBB plan invariants.
        ++plans;
        double power = 0.0;
        for (std::size_t i = 0; i < plan.embb.admitted.size(); ++i)
        {
            power += b * plan.embb.powers[i];
            if (plan.embb.powers[i] < 0.0)
                violation("negative eMBB power");
            if ((1.0 - cfg.delta) * b * plan.embb.rates[i] < cfg.r_th * (1.0 - tol))
                violation("eMBB rate floor");
        }
        if (power > cfg.P_BS * (1.0 + tol))
            violation("eMBB power budget");

        // Relaxation invariants on the three designs' SDPs.
        if (cfg.N > 0)
        {
            std::vector<LiftedChannel> lu, le;
            for (int x = 0; x < cfg.U; ++x)
                lu.push_back(lift(ch.g_ris_u[static_cast<std::size_t>(x)], ch.f_bs_ris,
                                  ch.g_bs_u[static_cast<std::size_t>(x)]));
            for (int e : plan.embb.admitted)
                le.push_back(lift(ch.h_ris_e[static_cast<std::size_t>(e)], ch.f_bs_ris,
                                  ch.h_bs_e[static_cast<std::size_t>(e)]));
            std::vector<SdpSolution> sols{solve_minmax_sdp(lu)};
            if (!le.empty())
            {
                SystemConfig relaxed = cfg;
                relaxed.r_th = 0.0;
                sols.push_back(solve_sumrate_sdp(le, plan.embb.powers, relaxed));
            }
            for (const auto& s : sols)
            {
                ++sdps;
                const double diag = (s.s.diagonal().array() - 1.0).abs().maxCoeff();
                const double eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(s.s).eigenvalues().minCoeff();
                if (diag > 1e-8)
                    violation(fmt("SDP diagonal off by %g", diag));
                if (eig < -1e-8)
                    violation(fmt("SDP min eigenvalue %g", eig));
            }
        }

        for (int slot = 0; slot < 15; ++slot)
        {
            MiniSlotState state = initial_state(plan.embb.rates, cfg);
            for (int m = 0; m < cfg.M; ++m)
            {
                const int combo = static_cast<int>(rng() % 16);
                const auto scheme = static_cast<Scheme>(combo % 4);
                const Strategy strategy = (combo / 4) % 2 ? Strategy::pf : Strategy::merl;
                const Allocator allocator = combo / 8 ? Allocator::optimization : Allocator::heuristic;
                const UrllcBatch batch = sample_arrivals(cfg, cfg.U, rng);
                SelectionTrace tr;
                const UrllcDecision d = allocate_mini_slot(plan, state, batch, strategy, allocator, scheme, cfg, &tr);
                const MiniSlotProblem p = problem_for(plan, state, batch, tr.chosen, strategy, cfg);
                for (const auto& msg : decision_violations(p, d))
                    violation(msg);
                const auto& rate = plan.view(tr.chosen).embb_rate;
                for (std::size_t e = 0; e < rate.size(); ++e)
                    if ((1.0 - static_cast<double>(d.I_E[e]) / b) * rate[e] < state.r_prime[e] - tol * std::abs(state.r_prime[e]))
                        violation("per-mini-slot eMBB residual threshold");
                for (int c = 0; c < candidate_count; ++c)
                    if (tr.admitted[static_cast<std::size_t>(c)] > d.admitted())
                        violation("selection dominance");
                ++decisions;
                state = advance_state(state, d, plan, cfg);
            }
            for (double cum : state.cum_rate)
                if (cum / cfg.M < cfg.r_th / b * (1.0 - tol))
                    violation("end-of-slot eMBB rate");
            ++slots;
        }
    }
    report(2, violations == 0 && decisions >= 10000, "invariant suite",
           fmt("%ld mini-slots, %ld plans, %ld SDP solutions, %ld violations%s%s, %.1f s", decisions, plans, sdps,
               violations, first.empty() ? "" : "; first: ", first.c_str(), seconds_since(t0)));
}

// ---------------------------------------------------------------- 4
double grid_max(int n, int steps, const std::function<double(const PhaseConfig&)>& f)
{
    double best = -std::numeric_limits<double>::infinity();
    const double h = two_pi / steps;
    if (n == 1)
        for (int i = 0; i < steps; ++i)
            best = std::max(best, f(PhaseConfig({i * h})));
    else
        for (int i = 0; i < steps; ++i)
            for (int j = 0; j < steps; ++j)
                best = std::max(best, f(PhaseConfig({i * h, j * h})));
    return best;
}

void sdr_sanity()
{
    const auto t0 = Clock::now();
    Rng rng(4242);
    int bad_rand = 0, bad_bound = 0, checked = 0;
    double worst_rel = 0.0;
    for (int i = 0; i < 50; ++i)
    {
        SystemConfig cfg;
        cfg.E = 3;
        cfg.B = 36;
        cfg.U = 3;
        cfg.N = 1 + i % 2;
        cfg.r_th = 0.0;
        const ChannelRealization ch = sample_channels(cfg, rng());
        std::vector<LiftedChannel> le, lu;
        for (int e = 0; e < cfg.E; ++e)
            le.push_back(lift(ch.h_ris_e[static_cast<std::size_t>(e)], ch.f_bs_ris, ch.h_bs_e[static_cast<std::size_t>(e)]));
        for (int x = 0; x < cfg.U; ++x)
            lu.push_back(lift(ch.g_ris_u[static_cast<std::size_t>(x)], ch.f_bs_ris, ch.g_bs_u[static_cast<std::size_t>(x)]));
        const std::vector<double> powers(static_cast<std::size_t>(cfg.E), cfg.P_BS / cfg.B);
        const int steps = cfg.N == 1 ? 2000 : 200;

        auto check = [&](const SdpSolution& sol, const PhaseObjective& f) {
            const double grid = grid_max(cfg.N, steps, f);
            const RandomizedPhases r = gaussian_randomize(sol, f, 1000, rng);
            const double rel = (grid - r.objective) / std::abs(grid);
            worst_rel = std::max(worst_rel, rel);
            bad_rand += rel > 1e-4;
            bad_bound += sol.objective < grid;
            ++checked;
        };
        check(solve_sumrate_sdp(le, powers, cfg),
              [&](const PhaseConfig& phi) { return sum_spectral_efficiency(le, powers, phi, cfg); });
        check(solve_minmax_sdp(lu), [&](const PhaseConfig& phi) { return min_gain(lu, phi); });
    }
    const double secs = seconds_since(t0);
    report(4, bad_rand == 0 && bad_bound == 0 && secs < 300.0, "SDR sanity",
           fmt("%d problems, randomized below grid by >1e-4: %d (worst shortfall %.2e), bound below grid: %d, %.1f s",
               checked, bad_rand, worst_rel, bad_bound, secs));
}

// ---------------------------------------------------------------- 7
void heuristic_latency()
{
    Rng rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const SystemConfig cfg;
    auto make = [&](int ne, int nl) {
        MiniSlotProblem p;
        p.W = cfg.W;
        p.c_th = cfg.c_th();
        p.b = cfg.rbs_per_user();
        for (int e = 0; e < ne; ++e)
            p.donors.push_back({0.005 * std::pow(10.0, u(rng)), static_cast<int>(rng() % (p.b + 1)), u(rng)});
        for (int l = 0; l < nl; ++l)
            p.packets.push_back({l, std::pow(10.0, 1.0 + 3.0 * u(rng))});
        return p;
    };
    auto time_ms = [&](int ne, int nl, int reps) {
        std::vector<MiniSlotProblem> ps;
        for (int i = 0; i < 64; ++i)
            ps.push_back(make(ne, nl));
        long sink = 0;
        const auto t0 = Clock::now();
        for (int r = 0; r < reps; ++r)
            sink += heuristic_allocate(ps[static_cast<std::size_t>(r % 64)]).admitted();
        const double ms = seconds_since(t0) * 1e3 / reps;
        return sink >= 0 ? ms : ms;
    };

    double sum = 0.0;
    for (int L = 1; L <= 20; ++L)
        sum += time_ms(8, L, 2000);
    const double mean = sum / 20.0;

    // Log-log fit of time against L E_f over a size grid.
    std::vector<double> xs, ys;
    for (int ne : {2, 4, 8})
        for (int L : {2, 5, 10, 20})
        {
            xs.push_back(std::log(static_cast<double>(ne * L)));
            ys.push_back(std::log(time_ms(ne, L, 4000)));
        }
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        mx += xs[i] / n;
        my += ys[i] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    report(7, mean < 10.0 && slope <= 2.0, "heuristic latency",
           fmt("mean %.4f ms at E_f = 8, L = 1..20; fitted exponent in L*E_f %.2f (limit 2)", mean, slope));
}

// ---------------------------------------------------------------- 9
void constants()
{
    const double ge = snr_gap(0.1, Service::embb);
    const double gu = snr_gap(1e-6, Service::urllc);
    SystemConfig cfg;
    const double cth = cfg.c_th();
    const bool ok = std::abs(ge - 1.5403) <= 1e-3 && std::abs(gu - 9.7645) <= 1e-3 &&
                    std::abs(cth - 1.7902e6) <= 1e-3 * 1.7902e6;
    report(9, ok, "constants", fmt("Gamma_eMBB %.5f, Gamma_URLLC %.5f, c_th %.1f bit/s", ge, gu, cth));
}

// ---------------------------------------------------------------- 3, 5
void ris_size_sweep()
{
    const auto t0 = Clock::now();
    const std::vector<Variant> vs{{SchemeId::no_ris, Strategy::pf, Allocator::heuristic},
                                  {SchemeId::scheme1, Strategy::pf, Allocator::heuristic},
                                  {SchemeId::scheme2, Strategy::pf, Allocator::heuristic},
                                  {SchemeId::scheme3, Strategy::pf, Allocator::heuristic},
                                  {SchemeId::selected, Strategy::pf, Allocator::heuristic}};
    std::vector<std::vector<Metrics>> at;
    const std::vector<int> ns{0, 20, 40, 60};
    for (int N : ns)
    {
        SystemConfig cfg;
        cfg.U = 65;
        cfg.N = N;
        at.push_back(run_point(cfg, vs, 200, 2024, worker_threads()));
        const auto& m = at.back();
        std::printf("      N = %2d: eta no_ris %.4f s1 %.4f s2 %.4f s3 %.4f sel %.4f (se %.4f); sum rate no_ris %.3g "
                    "sel %.3g\n",
                    N, m[0].eta, m[1].eta, m[2].eta, m[3].eta, m[4].eta, m[4].eta_se, m[0].sum_rate, m[4].sum_rate);
        std::fflush(stdout);
    }
    const double secs = seconds_since(t0);

    double worst = std::numeric_limits<double>::infinity();
    for (const auto& m : at[2])
        worst = std::min(worst, m.worst_qos_ratio);
    report(3, worst >= 1.0 - 1e-6, "end-of-slot eMBB QoS",
           fmt("smallest slot-average / floor over 200 trials x 5 schemes at N = 40: %.6f", worst));

    const Metrics& bare = at[3][0];
    const Metrics& sel = at[3][4];
    const bool a = sel.eta - bare.eta >= 0.02 && bare.eta >= 0.90 && bare.eta <= 0.99;
    const double gain = sel.sum_rate / bare.sum_rate - 1.0;
    const bool b = gain >= 0.25;
    bool c = true;
    for (std::size_t i = 1; i < at.size(); ++i)
    {
        const double se = std::max(at[i][4].eta_se, at[i - 1][4].eta_se);
        c = c && at[i][4].eta >= at[i - 1][4].eta - se;
    }
    report(5, a && b && c && secs < 1800.0, "reference numbers",
           fmt("N = 60: eta %.4f vs no-RIS %.4f (%s), sum rate +%.1f%% (%s), eta monotone in N (%s), %.0f s", sel.eta,
               bare.eta, a ? "ok" : "fail", 100.0 * gain, b ? "ok" : "fail", c ? "ok" : "fail", secs));
}

// ---------------------------------------------------------------- 6, 8
void allocator_and_strategy()
{
    const std::vector<Variant> vs{{SchemeId::selected, Strategy::pf, Allocator::optimization},
                                  {SchemeId::selected, Strategy::pf, Allocator::heuristic},
                                  {SchemeId::selected, Strategy::merl, Allocator::optimization},
                                  {SchemeId::selected, Strategy::merl, Allocator::heuristic}};
    bool parity = true;
    std::string parity_detail;
    for (int U : {20, 50})
    {
        SystemConfig cfg;
        cfg.U = U;
        const auto m = run_point(cfg, vs, 100, 3030, worker_threads());
        for (int s = 0; s < 2; ++s)
        {
            const Metrics& opt = m[static_cast<std::size_t>(2 * s)];
            const Metrics& heu = m[static_cast<std::size_t>(2 * s + 1)];
            const double deta = std::abs(opt.eta - heu.eta);
            const double drate = std::abs(opt.sum_rate - heu.sum_rate) / std::max(opt.sum_rate, heu.sum_rate);
            parity = parity && deta <= 0.03 && drate <= 0.05;
            parity_detail += fmt("%sU=%d %s: |d eta| %.4f, rate gap %.2f%%", parity_detail.empty() ? "" : "; ", U,
                                 s == 0 ? "pf" : "merl", deta, 100.0 * drate);
        }
    }
    report(6, parity, "optimization vs heuristic", parity_detail);

    SystemConfig cfg;
    cfg.U = 65;
    const auto m = run_point(cfg, vs, 100, 3030, worker_threads());
    bool order = true;
    std::string detail;
    for (int a = 0; a < 2; ++a)
    {
        const Metrics& pf = m[static_cast<std::size_t>(a)];
        const Metrics& merl = m[static_cast<std::size_t>(2 + a)];
        const bool eta_ok = pf.eta >= merl.eta - std::max(pf.eta_se, merl.eta_se);
        const bool rate_ok = merl.sum_rate >= pf.sum_rate - std::max(pf.sum_rate_se, merl.sum_rate_se);
        order = order && eta_ok && rate_ok;
        detail += fmt("%s%s: eta pf %.4f merl %.4f, sum rate pf %.4g merl %.4g", detail.empty() ? "" : "; ",
                      a == 0 ? "optimization" : "heuristic", pf.eta, merl.eta, pf.sum_rate, merl.sum_rate);
    }
    report(8, order, "strategy ordering", detail);
}

} // namespace

int main()
{
    const auto t0 = Clock::now();
    constants();
    oracle_equivalence();
    sdr_sanity();
    heuristic_latency();
    invariant_suite();
    allocator_and_strategy();
    ris_size_sweep();
    std::sort(summary.begin(), summary.end());
    std::printf("\nsummary\n");
    for (const auto& [id, line] : summary)
        std::printf("%s\n", line.c_str());
    std::printf("%d criteria failed, %.0f s total\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
