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

#include "risurllc/channel.hpp"
#include "risurllc/config.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace testutil
{

using risurllc::cplx;
using risurllc::Rng;

inline cplx cn(Rng& rng, double scale = 1.0)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return scale * cplx(re, im);
}

inline std::vector<cplx> cn_vec(Rng& rng, int n, double scale = 1.0)
{
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (auto& x : v)
        x = cn(rng, scale);
    return v;
}

inline risurllc::PhaseConfig random_phases(Rng& rng, int n)
{
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::vector<double> p(static_cast<std::size_t>(n));
    for (auto& x : p)
        x = u(rng);
    return risurllc::PhaseConfig(p);
}

inline bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300}); }

/// Smaller system for fast tests; keeps the reference per-user RB count.
inline risurllc::SystemConfig small_config(int E = 3, int U = 4, int N = 4)
{
    risurllc::SystemConfig cfg;
    cfg.E = E;
    cfg.U = U;
    cfg.N = N;
    cfg.B = 12 * E;
    cfg.randomization_trials = 50;
    return cfg;
}

} // namespace testutil
