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


// Exhaustive search used as a reference on tiny instances.

#include "risurllc/urllc_alloc.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

namespace risurllc
{

namespace
{

struct Best
{
    int count = 0;
    double loss = std::numeric_limits<double>::infinity();
    unsigned mask = 0;
    std::vector<int> I_L;
    std::vector<int> I_E;
};

} // namespace

UrllcDecision brute_force_allocate(const MiniSlotProblem& problem, const BruteForceCaps& caps)
{
    problem.check();
    const int nl = problem.packet_count();
    const int ne = problem.donor_count();
    if (nl > caps.max_packets || ne > caps.max_donors || problem.b > caps.max_rbs)
        throw std::invalid_argument("brute_force_allocate: instance exceeds enumeration caps");

    int total = 0;
    for (const auto& d : problem.donors)
        total += d.cap;

    // energy[l][r]: power-RB product packet l needs on r RBs.
    std::vector<std::vector<double>> energy(static_cast<std::size_t>(nl),
                                            std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    for (int l = 0; l < nl; ++l)
        for (int r = 1; r <= total; ++r)
            energy[static_cast<std::size_t>(l)][static_cast<std::size_t>(r)] =
                r * power_for_rbs(r, problem.c_th, problem.packets[static_cast<std::size_t>(l)].alpha, problem.W);

    // need[mask][t]: least energy for the packets in mask sharing exactly t RBs,
    // found by enumerating every composition of t.
    const unsigned subsets = 1u << nl;
    std::vector<std::vector<double>> need(subsets, std::vector<double>(static_cast<std::size_t>(total) + 1,
                                                                       std::numeric_limits<double>::infinity()));
    std::vector<std::vector<std::vector<int>>> split(subsets,
                                                     std::vector<std::vector<int>>(static_cast<std::size_t>(total) + 1));
    for (unsigned mask = 1; mask < subsets; ++mask)
    {
        std::vector<int> members;
        for (int l = 0; l < nl; ++l)
            if (mask & (1u << l))
                members.push_back(l);
        std::vector<int> rbs(members.size(), 0);
        auto rec = [&](auto&& self, std::size_t i, int used, double acc) -> void {
            if (i == members.size())
            {
                auto& slot = need[mask][static_cast<std::size_t>(used)];
                if (acc < slot)
                {
                    slot = acc;
                    split[mask][static_cast<std::size_t>(used)] = rbs;
                }
                return;
            }
            for (int r = 1; used + r <= total; ++r)
            {
                rbs[i] = r;
                self(self, i + 1, used + r,
                     acc + energy[static_cast<std::size_t>(members[i])][static_cast<std::size_t>(r)]);
            }
        };
        rec(rec, 0, 0, 0.0);
    }

    Best best;
    best.I_E.assign(static_cast<std::size_t>(ne), 0);
    std::vector<int> punct(static_cast<std::size_t>(ne), 0);
    auto visit = [&]() {
        int t = 0;
        double pool = 0.0, loss = 0.0;
        for (int e = 0; e < ne; ++e)
        {
            const auto& d = problem.donors[static_cast<std::size_t>(e)];
            t += punct[static_cast<std::size_t>(e)];
            pool += punct[static_cast<std::size_t>(e)] * d.power;
            loss += punct[static_cast<std::size_t>(e)] * d.weight;
        }
        for (unsigned mask = 1; mask < subsets; ++mask)
        {
            const double e = need[mask][static_cast<std::size_t>(t)];
            if (!(e <= pool * (1.0 + power_rel_tol)))
                continue;
            const int count = std::popcount(mask);
            if (count > best.count || (count == best.count && loss < best.loss))
            {
                best.count = count;
                best.loss = loss;
                best.mask = mask;
                best.I_E = punct;
                best.I_L = split[mask][static_cast<std::size_t>(t)];
            }
        }
    };
    auto enumerate = [&](auto&& self, int e) -> void {
        if (e == ne)
        {
            visit();
            return;
        }
        for (int x = 0; x <= problem.donors[static_cast<std::size_t>(e)].cap; ++x)
        {
            punct[static_cast<std::size_t>(e)] = x;
            self(self, e + 1);
        }
        punct[static_cast<std::size_t>(e)] = 0;
    };
    enumerate(enumerate, 0);

    UrllcDecision d = UrllcDecision::empty(problem);
    if (best.count == 0)
        return d;
    d.I_E = best.I_E;
    std::vector<int> order;
    std::size_t j = 0;
    for (int l = 0; l < nl; ++l)
        if (best.mask & (1u << l))
        {
            const auto li = static_cast<std::size_t>(l);
            d.k[li] = 1;
            d.I_L[li] = best.I_L[j++];
            d.p_L[li] = power_for_rbs(d.I_L[li], problem.c_th, problem.packets[li].alpha, problem.W);
            order.push_back(l);
        }
    // Any donor-to-packet matrix with these margins is valid; fill in index order.
    std::vector<int> left = d.I_E;
    std::size_t e = 0;
    for (int l : order)
    {
        int want = d.I_L[static_cast<std::size_t>(l)];
        while (want > 0)
        {
            while (left[e] == 0)
                ++e;
            const int take = std::min(want, left[e]);
            d.assignment[e][static_cast<std::size_t>(l)] += take;
            left[e] -= take;
            want -= take;
        }
    }
    d.embb_loss = best.loss;
    return d;
}

} // namespace risurllc
