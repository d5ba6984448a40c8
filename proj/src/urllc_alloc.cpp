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


#include "risurllc/urllc_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace risurllc
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

bool fits(double need, double pool) { return need <= pool * (1.0 + power_rel_tol); }

// Packet order: decreasing alpha, lower id first on ties.
std::vector<int> packets_by_gain(const MiniSlotProblem& p)
{
    std::vector<int> order(static_cast<std::size_t>(p.packet_count()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
        const auto& pa = p.packets[static_cast<std::size_t>(a)];
        const auto& pc = p.packets[static_cast<std::size_t>(c)];
        if (pa.alpha != pc.alpha)
            return pa.alpha > pc.alpha;
        return pa.id < pc.id;
    });
    return order;
}

// Donor order: increasing weight, lower index first on ties.
std::vector<int> donors_by_weight(const MiniSlotProblem& p)
{
    std::vector<int> order(static_cast<std::size_t>(p.donor_count()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
        return p.donors[static_cast<std::size_t>(a)].weight < p.donors[static_cast<std::size_t>(c)].weight;
    });
    return order;
}

double packet_energy(const MiniSlotProblem& p, int l, int rbs)
{
    if (rbs == 0)
        return 0.0;
    return rbs * power_for_rbs(rbs, p.c_th, p.packets[static_cast<std::size_t>(l)].alpha, p.W);
}

struct Split
{
    double energy = 0.0;
    std::vector<int> rbs; // aligned with the packet list passed in
};

// Exact integer minimum of sum_l I_l p*(I_l) with sum I_l = total, I_l >= 1.
// Each term is convex in I_l, so adding RBs one at a time by largest saving is optimal.
Split min_energy_split(const MiniSlotProblem& p, std::span<const int> set, int total)
{
    const std::size_t n = set.size();
    Split s;
    s.rbs.assign(n, 1);
    if (static_cast<int>(n) > total)
    {
        s.energy = inf;
        return s;
    }
    std::vector<double> cur(n), next(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        cur[i] = packet_energy(p, set[i], 1);
        next[i] = packet_energy(p, set[i], 2);
    }
    for (int extra = total - static_cast<int>(n); extra > 0; --extra)
    {
        std::size_t best = 0;
        double saving = -inf;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double d = std::isinf(cur[i]) ? inf : cur[i] - next[i];
            if (d > saving)
            {
                saving = d;
                best = i;
            }
        }
        ++s.rbs[best];
        cur[best] = next[best];
        next[best] = packet_energy(p, set[best], s.rbs[best] + 1);
    }
    for (std::size_t i = 0; i < n; ++i)
        s.energy += cur[i];
    return s;
}

// Continuous relaxation of min_energy_split. With x = a/I and a = c_th ln2 / W the
// marginal energy of one more RB is (e^x (1 - x) - 1)/alpha; all packets above the
// I >= 1 bound share the same marginal -nu.
std::vector<double> relaxed_split(const MiniSlotProblem& p, std::span<const int> set, int total)
{
    const std::size_t n = set.size();
    std::vector<double> rbs(n, 1.0);
    if (n == 0 || total <= static_cast<int>(n))
        return rbs;
    const double a = p.c_th * std::numbers::ln2 / p.W;
    auto h = [](double x) { return std::exp(x) * (1.0 - x); };

    auto rbs_at = [&](double nu, std::vector<double>& out) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double alpha = p.packets[static_cast<std::size_t>(set[i])].alpha;
            const double target = 1.0 - nu * alpha;
            if (h(a) >= target)
                out[i] = 1.0;
            else
            {
                double lo = 0.0, hi = a; // h(lo) > target > h(hi)
                for (int it = 0; it < 100; ++it)
                {
                    const double mid = 0.5 * (lo + hi);
                    (h(mid) > target ? lo : hi) = mid;
                }
                const double x = 0.5 * (lo + hi);
                out[i] = x > 0.0 ? a / x : inf;
            }
            sum += out[i];
        }
        return sum;
    };

    double nu_hi = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        nu_hi = std::max(nu_hi, (1.0 - h(a)) / p.packets[static_cast<std::size_t>(set[i])].alpha);
    double lo = std::log(nu_hi) - 80.0, hi = std::log(nu_hi);
    std::vector<double> trial(n);
    for (int it = 0; it < 200; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        (rbs_at(std::exp(mid), trial) > total ? lo : hi) = mid;
    }
    rbs_at(std::exp(hi), rbs);
    // Spread any bisection residue so the RB counts sum to total exactly.
    const double sum = std::accumulate(rbs.begin(), rbs.end(), 0.0);
    const double scale = (total - static_cast<double>(n)) / std::max(sum - static_cast<double>(n), 1e-300);
    for (double& r : rbs)
        r = 1.0 + (r - 1.0) * scale;
    return rbs;
}

double relaxed_energy(const MiniSlotProblem& p, std::span<const int> set, std::span<const double> rbs)
{
    double e = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i)
    {
        const double alpha = p.packets[static_cast<std::size_t>(set[i])].alpha;
        e += rbs[i] * std::expm1(p.c_th / (rbs[i] * p.W) * std::numbers::ln2) / alpha;
    }
    return e;
}

// Floor, then hand the remaining RBs to the largest fractional parts.
std::vector<int> round_split(std::span<const double> rbs, int total)
{
    const std::size_t n = rbs.size();
    std::vector<int> out(n);
    int used = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        out[i] = std::max(1, static_cast<int>(std::floor(rbs[i])));
        used += out[i];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return rbs[x] - std::floor(rbs[x]) > rbs[y] - std::floor(rbs[y]);
    });
    for (std::size_t j = 0; used < total && n > 0; j = (j + 1) % n, ++used)
        ++out[order[j]];
    return out;
}

// Fills packets (in the given order) from donors (in the given order).
void assign_rbs(const MiniSlotProblem& p, std::span<const int> packet_order, std::span<const int> donor_order,
                UrllcDecision& d)
{
    std::vector<int> left = d.I_E;
    std::size_t di = 0;
    for (int l : packet_order)
    {
        int need = d.I_L[static_cast<std::size_t>(l)];
        while (need > 0)
        {
            if (di >= donor_order.size())
                throw std::logic_error("assign_rbs: donor RBs exhausted");
            const auto e = static_cast<std::size_t>(donor_order[di]);
            const int take = std::min(need, left[e]);
            d.assignment[e][static_cast<std::size_t>(l)] += take;
            left[e] -= take;
            need -= take;
            if (left[e] == 0)
                ++di;
        }
    }
    (void)p;
}

double loss_of(const MiniSlotProblem& p, std::span<const int> punct)
{
    double f = 0.0;
    for (std::size_t e = 0; e < punct.size(); ++e)
        f += punct[e] * p.donors[e].weight;
    return f;
}

} // namespace

MiniSlotState initial_state(std::span<const double> baseline_rate, const SystemConfig& cfg)
{
    MiniSlotState s;
    s.m = 1;
    s.baseline_rate.assign(baseline_rate.begin(), baseline_rate.end());
    s.cum_rate.assign(baseline_rate.size(), 0.0);
    s.r_prime = residual_threshold(s, cfg);
    return s;
}

std::vector<double> residual_threshold(const MiniSlotState& state, const SystemConfig& cfg)
{
    if (state.m < 1 || state.m > cfg.M)
        throw std::invalid_argument("residual_threshold: mini-slot index out of range");
    if (state.cum_rate.size() != state.baseline_rate.size())
        throw std::invalid_argument("residual_threshold: inconsistent state");
    const double target = cfg.M * cfg.r_th / cfg.rbs_per_user();
    std::vector<double> r(state.baseline_rate.size());
    for (std::size_t e = 0; e < r.size(); ++e)
        r[e] = target - (state.cum_rate[e] + (cfg.M - state.m) * state.baseline_rate[e]);
    return r;
}

int max_puncturable(double r_prime, double rate, int b)
{
    if (r_prime <= 0.0)
        return b;
    if (!(rate > 0.0))
        return 0;
    const double x = std::floor(b * (1.0 - r_prime / rate));
    return static_cast<int>(std::clamp(x, 0.0, static_cast<double>(b)));
}

int max_puncturable(const MiniSlotState& state, int e, const SystemConfig& cfg)
{
    const auto i = static_cast<std::size_t>(e);
    return max_puncturable(state.r_prime.at(i), state.baseline_rate.at(i), cfg.rbs_per_user());
}

std::vector<double> max_rate_loss(std::span<const double> rate, std::span<const double> r_prime)
{
    if (rate.size() != r_prime.size())
        throw std::invalid_argument("max_rate_loss: size mismatch");
    std::vector<double> out(rate.size());
    for (std::size_t e = 0; e < rate.size(); ++e)
        out[e] = std::max(rate[e] - r_prime[e], 0.0);
    return out;
}

StrategyWeights strategy_weights(Strategy strategy, std::span<const double> r_hat)
{
    StrategyWeights w;
    w.strategy = strategy;
    const std::size_t n = r_hat.size();
    w.beta.resize(n);
    if (n == 0)
        return w;
    double total = 0.0;
    for (double r : r_hat)
    {
        if (r < 0.0 || !std::isfinite(r))
            throw std::invalid_argument("strategy_weights: rate losses must be finite and >= 0");
        total += r;
    }
    for (std::size_t e = 0; e < n; ++e)
    {
        const double share = total > 0.0 ? r_hat[e] / total : 1.0 / static_cast<double>(n);
        w.beta[e] = strategy == Strategy::merl ? share : 1.0 - share;
    }
    return w;
}

double power_for_rbs(int rbs, double c_th, double alpha, double W)
{
    if (rbs < 0 || c_th < 0.0 || alpha < 0.0 || !(W > 0.0))
        throw std::invalid_argument("power_for_rbs: invalid argument");
    if (c_th == 0.0)
        return 0.0;
    if (rbs == 0 || alpha == 0.0)
        return inf;
    return std::expm1(c_th / (rbs * W) * std::numbers::ln2) / alpha;
}

double MiniSlotProblem::packet_rate(int l, double p) const
{
    return W * std::log2(1.0 + packets.at(static_cast<std::size_t>(l)).alpha * p);
}

void MiniSlotProblem::check() const
{
    if (!(W > 0.0) || c_th < 0.0 || b < 0)
        throw std::invalid_argument("MiniSlotProblem: W > 0, c_th >= 0 and b >= 0 required");
    for (const auto& d : donors)
        if (d.power < 0.0 || d.cap < 0 || d.cap > b || !std::isfinite(d.weight))
            throw std::invalid_argument("MiniSlotProblem: bad donor");
    for (const auto& pk : packets)
        if (pk.alpha < 0.0 || !std::isfinite(pk.alpha))
            throw std::invalid_argument("MiniSlotProblem: bad packet gain");
}

MiniSlotProblem make_problem(const MiniSlotState& state, const UrllcBatch& batch, const StrategyWeights& weights,
                             std::span<const double> packet_gain, std::span<const double> embb_rate,
                             std::span<const double> embb_power, const SystemConfig& cfg)
{
    const std::size_t n = state.baseline_rate.size();
    if (embb_rate.size() != n || embb_power.size() != n || weights.beta.size() != n || state.r_prime.size() != n)
        throw std::invalid_argument("make_problem: eMBB vectors must match the state");
    if (packet_gain.size() != batch.packets.size())
        throw std::invalid_argument("make_problem: one gain per packet required");
    MiniSlotProblem p;
    p.W = cfg.W;
    p.c_th = batch.c_th;
    p.b = cfg.rbs_per_user();
    const double noise = cfg.sigma2 * snr_gap(cfg.eps_urllc, Service::urllc);
    for (std::size_t e = 0; e < n; ++e)
        p.donors.push_back({embb_power[e], max_puncturable(state.r_prime[e], embb_rate[e], p.b), weights.beta[e]});
    for (std::size_t l = 0; l < packet_gain.size(); ++l)
        p.packets.push_back({batch.packets[l].id, packet_gain[l] / noise});
    return p;
}

int UrllcDecision::admitted() const { return static_cast<int>(std::count(k.begin(), k.end(), 1)); }

UrllcDecision UrllcDecision::empty(const MiniSlotProblem& problem)
{
    const auto nl = static_cast<std::size_t>(problem.packet_count());
    const auto ne = static_cast<std::size_t>(problem.donor_count());
    UrllcDecision d;
    d.k.assign(nl, 0);
    d.I_L.assign(nl, 0);
    d.I_E.assign(ne, 0);
    d.assignment.assign(ne, std::vector<int>(nl, 0));
    d.p_L.assign(nl, 0.0);
    return d;
}

Admission solve_admission(const MiniSlotProblem& problem)
{
    problem.check();
    const auto nl = static_cast<std::size_t>(problem.packet_count());
    Admission out;
    out.k.assign(nl, 0);
    out.I_L.assign(nl, 0);
    out.I_E.assign(static_cast<std::size_t>(problem.donor_count()), 0);

    int total = 0;
    double pool = 0.0;
    for (const auto& d : problem.donors)
    {
        total += d.cap;
        pool += d.cap * d.power;
    }
    std::vector<int> order = packets_by_gain(problem);
    // Packets with zero gain can never be served.
    std::erase_if(order, [&](int l) {
        return problem.c_th > 0.0 && !(problem.packets[static_cast<std::size_t>(l)].alpha > 0.0);
    });
    if (order.empty() || total == 0)
        return out;

    // Relaxed admission: the largest prefix whose continuous split fits the pool.
    int count = std::min(static_cast<int>(order.size()), total);
    while (count > 0)
    {
        const std::span<const int> set(order.data(), static_cast<std::size_t>(count));
        if (fits(relaxed_energy(problem, set, relaxed_split(problem, set, total)), pool))
            break;
        --count;
    }
    // Round and repair.
    while (count > 0)
    {
        const std::span<const int> set(order.data(), static_cast<std::size_t>(count));
        const std::vector<int> rbs = round_split(relaxed_split(problem, set, total), total);
        double energy = 0.0;
        for (std::size_t i = 0; i < set.size(); ++i)
            energy += packet_energy(problem, set[i], rbs[i]);
        if (fits(energy, pool))
        {
            for (std::size_t i = 0; i < set.size(); ++i)
            {
                out.k[static_cast<std::size_t>(set[i])] = 1;
                out.I_L[static_cast<std::size_t>(set[i])] = rbs[i];
            }
            for (std::size_t e = 0; e < out.I_E.size(); ++e)
                out.I_E[e] = problem.donors[e].cap;
            return out;
        }
        --count;
    }
    return out;
}

UrllcDecision solve_allocation(const MiniSlotProblem& problem, std::span<const int> k)
{
    problem.check();
    if (k.size() != static_cast<std::size_t>(problem.packet_count()))
        throw std::invalid_argument("solve_allocation: one admission bit per packet required");
    UrllcDecision d = UrllcDecision::empty(problem);
    std::vector<int> set;
    for (int l : packets_by_gain(problem))
        if (k[static_cast<std::size_t>(l)] != 0)
            set.push_back(l);
    if (set.empty())
        return d;

    // Pareto frontier over donors of (loss, pooled power) for each punctured RB total.
    struct Entry
    {
        double loss, power;
        int parent, take;
    };
    const int ne = problem.donor_count();
    int total = 0;
    for (const auto& dn : problem.donors)
        total += dn.cap;
    std::vector<std::vector<std::vector<Entry>>> layer(static_cast<std::size_t>(ne) + 1,
                                                       std::vector<std::vector<Entry>>(static_cast<std::size_t>(total) + 1));
    layer[0][0].push_back({0.0, 0.0, -1, 0});
    int reach = 0;
    for (int e = 0; e < ne; ++e)
    {
        const auto& dn = problem.donors[static_cast<std::size_t>(e)];
        auto& next = layer[static_cast<std::size_t>(e) + 1];
        const auto& prev = layer[static_cast<std::size_t>(e)];
        for (int c = 0; c <= reach; ++c)
            for (std::size_t i = 0; i < prev[static_cast<std::size_t>(c)].size(); ++i)
            {
                const Entry& en = prev[static_cast<std::size_t>(c)][i];
                for (int x = 0; x <= dn.cap; ++x)
                    next[static_cast<std::size_t>(c + x)].push_back(
                        {en.loss + x * dn.weight, en.power + x * dn.power, static_cast<int>(i), x});
            }
        reach += dn.cap;
        for (auto& list : next)
        {
            std::stable_sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) {
                return a.loss != b.loss ? a.loss < b.loss : a.power > b.power;
            });
            std::vector<Entry> kept;
            double best_power = -inf;
            for (const Entry& en : list)
                if (en.power > best_power)
                {
                    kept.push_back(en);
                    best_power = en.power;
                }
            list = std::move(kept);
        }
    }

    double best_loss = inf;
    int best_total = -1;
    std::size_t best_entry = 0;
    Split best_split;
    for (int t = static_cast<int>(set.size()); t <= total; ++t)
    {
        const Split s = min_energy_split(problem, set, t);
        const auto& list = layer[static_cast<std::size_t>(ne)][static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < list.size(); ++i)
            if (fits(s.energy, list[i].power))
            {
                if (list[i].loss < best_loss)
                {
                    best_loss = list[i].loss;
                    best_total = t;
                    best_entry = i;
                    best_split = s;
                }
                break;
            }
    }
    if (best_total < 0)
        throw std::logic_error("solve_allocation: admitted packets cannot be served");

    int c = best_total;
    std::size_t idx = best_entry;
    for (int e = ne; e > 0; --e)
    {
        const Entry& en = layer[static_cast<std::size_t>(e)][static_cast<std::size_t>(c)][idx];
        d.I_E[static_cast<std::size_t>(e) - 1] = en.take;
        c -= en.take;
        idx = static_cast<std::size_t>(en.parent);
    }
    for (std::size_t i = 0; i < set.size(); ++i)
    {
        const auto l = static_cast<std::size_t>(set[i]);
        d.k[l] = 1;
        d.I_L[l] = best_split.rbs[i];
        d.p_L[l] = power_for_rbs(d.I_L[l], problem.c_th, problem.packets[l].alpha, problem.W);
    }
    assign_rbs(problem, set, donors_by_weight(problem), d);
    d.embb_loss = loss_of(problem, d.I_E);
    return d;
}

UrllcDecision optimize_allocate(const MiniSlotProblem& problem)
{
    const Admission a = solve_admission(problem);
    return solve_allocation(problem, a.k);
}

UrllcDecision heuristic_allocate(const MiniSlotProblem& problem)
{
    problem.check();
    UrllcDecision d = UrllcDecision::empty(problem);
    const std::vector<int> donors = donors_by_weight(problem);
    std::vector<int> left(static_cast<std::size_t>(problem.donor_count()));
    for (std::size_t e = 0; e < left.size(); ++e)
        left[e] = problem.donors[e].cap;
    std::vector<int> take(left.size());

    for (int l : packets_by_gain(problem))
    {
        const auto li = static_cast<std::size_t>(l);
        std::fill(take.begin(), take.end(), 0);
        double got = 0.0;
        bool served = problem.c_th == 0.0;
        for (int e : donors)
        {
            if (served)
                break;
            const auto ei = static_cast<std::size_t>(e);
            const double rate = problem.packet_rate(l, problem.donors[ei].power);
            if (left[ei] == 0 || !(rate > 0.0))
                continue;
            const double need = std::ceil((problem.c_th - got) / rate);
            if (need <= left[ei])
            {
                take[ei] = static_cast<int>(need);
                served = true;
            }
            else
            {
                take[ei] = left[ei];
                got += left[ei] * rate;
            }
        }
        if (!served)
            continue; // dropped; tentative RBs go back to the donors
        int rbs = 0;
        double energy = 0.0;
        for (std::size_t e = 0; e < take.size(); ++e)
        {
            left[e] -= take[e];
            d.I_E[e] += take[e];
            d.assignment[e][li] = take[e];
            rbs += take[e];
            energy += take[e] * problem.donors[e].power;
        }
        if (rbs == 0)
            continue;
        d.k[li] = 1;
        d.I_L[li] = rbs;
        d.p_L[li] = energy / rbs;
    }
    d.embb_loss = loss_of(problem, d.I_E);
    return d;
}

std::vector<std::string> decision_violations(const MiniSlotProblem& problem, const UrllcDecision& d, double rel_tol)
{
    std::vector<std::string> out;
    const auto nl = static_cast<std::size_t>(problem.packet_count());
    const auto ne = static_cast<std::size_t>(problem.donor_count());
    if (d.k.size() != nl || d.I_L.size() != nl || d.p_L.size() != nl || d.I_E.size() != ne ||
        d.assignment.size() != ne)
    {
        out.emplace_back("decision vectors have wrong sizes");
        return out;
    }
    for (std::size_t e = 0; e < ne; ++e)
    {
        if (d.assignment[e].size() != nl)
        {
            out.emplace_back("assignment row has wrong size");
            return out;
        }
        int sum = 0;
        for (std::size_t l = 0; l < nl; ++l)
        {
            if (d.assignment[e][l] < 0)
                out.push_back("negative assignment at donor " + std::to_string(e));
            sum += d.assignment[e][l];
        }
        if (sum != d.I_E[e])
            out.push_back("donor " + std::to_string(e) + ": assignment row does not sum to I_E");
        if (d.I_E[e] < 0 || d.I_E[e] > problem.donors[e].cap)
            out.push_back("donor " + std::to_string(e) + ": punctures exceed the cap");
    }
    double used = 0.0, pool = 0.0;
    for (std::size_t e = 0; e < ne; ++e)
        pool += d.I_E[e] * problem.donors[e].power;
    for (std::size_t l = 0; l < nl; ++l)
    {
        int sum = 0;
        for (std::size_t e = 0; e < ne; ++e)
            sum += d.assignment[e][l];
        if (sum != d.I_L[l])
            out.push_back("packet " + std::to_string(l) + ": assignment column does not sum to I_L");
        if (d.k[l] != 0 && d.k[l] != 1)
            out.push_back("packet " + std::to_string(l) + ": admission bit not binary");
        if ((d.k[l] == 1) != (d.I_L[l] > 0))
            out.push_back("packet " + std::to_string(l) + ": admitted iff it holds RBs");
        if (d.p_L[l] < 0.0 || !std::isfinite(d.p_L[l]))
            out.push_back("packet " + std::to_string(l) + ": invalid power");
        used += d.I_L[l] * d.p_L[l];
        if (d.k[l] == 1)
        {
            const double rate = d.I_L[l] * problem.packet_rate(static_cast<int>(l), d.p_L[l]);
            if (rate < problem.c_th * (1.0 - rel_tol))
                out.push_back("packet " + std::to_string(l) + ": rate below c_th");
        }
    }
    if (used > pool * (1.0 + rel_tol) + 1e-300)
        out.emplace_back("packet power exceeds punctured eMBB power");
    return out;
}

} // namespace risurllc
