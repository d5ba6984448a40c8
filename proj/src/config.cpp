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

#include "risurllc/config.hpp"

#include <cmath>

namespace risurllc
{

int SystemConfig::rbs_per_user() const
{
    if (E < 1 || B % E != 0)
        throw InfeasibleConfig("B must be a positive multiple of E");
    return B / E;
}

double SystemConfig::embb_rate_floor() const
{
    if (r_th == 0.0)
        return 0.0;
    if (delta >= 1.0)
        throw InfeasibleConfig("delta = 1 leaves no usable rate for a positive r_th");
    return r_th / ((1.0 - delta) * rbs_per_user());
}

void validate(const SystemConfig& cfg)
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw std::invalid_argument(what);
    };
    require(cfg.E >= 1, "E must be >= 1");
    require(cfg.U >= 0, "U must be >= 0");
    require(cfg.N >= 0, "N must be >= 0");
    require(cfg.M >= 1, "M must be >= 1");
    require(cfg.B >= 1, "B must be >= 1");
    require(cfg.W > 0.0 && std::isfinite(cfg.W), "W must be positive");
    require(cfg.tau > 0.0 && std::isfinite(cfg.tau), "tau must be positive");
    require(cfg.packet_bits > 0.0, "packet_bits must be positive");
    require(cfg.P_BS > 0.0 && std::isfinite(cfg.P_BS), "P_BS must be positive");
    require(cfg.sigma2 > 0.0 && std::isfinite(cfg.sigma2), "sigma2 must be positive");
    require(cfg.eps_embb > 0.0 && cfg.eps_embb < 1.0, "eps_embb must lie in (0,1)");
    require(cfg.eps_urllc > 0.0 && cfg.eps_urllc < 1.0, "eps_urllc must lie in (0,1)");
    require(cfg.delta >= 0.0 && cfg.delta <= 1.0, "delta must lie in [0,1]");
    require(cfg.r_th >= 0.0 && std::isfinite(cfg.r_th), "r_th must be >= 0");
    require(cfg.lambda >= 0.0 && std::isfinite(cfg.lambda), "lambda must be >= 0");
    require(cfg.geometry.coverage_radius_m > 0.0, "coverage radius must be positive");
    require(cfg.geometry.bs_ris_distance_m > 0.0, "BS-RIS distance must be positive");
    require(cfg.geometry.min_distance_m > 0.0, "minimum distance must be positive");
    require(cfg.pathloss.alpha0 > 0.0 && cfg.pathloss.alpha1 > 0.0, "path-loss references must be positive");
    require(cfg.kappa >= 0.0, "kappa must be >= 0");
    require(cfg.randomization_trials >= 1, "randomization_trials must be >= 1");

    // Well-formed, but the model cannot be instantiated.
    if (cfg.B % cfg.E != 0)
        throw InfeasibleConfig("B must be divisible by E");
    if (cfg.eps_embb >= 0.2 || cfg.eps_urllc >= 0.2)
        throw InfeasibleConfig("target BLER >= 0.2 gives a non-positive SNR gap");
    if (cfg.delta >= 1.0 && cfg.r_th > 0.0)
        throw InfeasibleConfig("delta = 1 with r_th > 0 is unsatisfiable");
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace risurllc
