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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace risurllc
{

/// Raised when a configuration is well-formed but cannot describe a usable system
/// (e.g. B not divisible by E, or a rate floor that no finite power can meet).
class InfeasibleConfig : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class Service
{
    embb,
    urllc
};

struct Geometry
{
    double coverage_radius_m = 110.0;
    double bs_ris_distance_m = 20.0;
    double min_distance_m = 1.0; // sampled link distances are clamped to this (reference distance)
};

struct PathLoss
{
    double alpha0 = 1e-3; // direct links, linear (-30 dB)
    double alpha1 = 1e-4; // cascaded links, linear (-40 dB)
    double rho0 = 3.5;    // BS -> user
    double rho1 = 2.2;    // BS -> RIS
    double rho2 = 2.8;    // RIS -> user
};

/// Full system description for one simulated cell. Defaults follow the
/// reference parameter set (8 eMBB users, 96 RBs of 180 kHz, 33 dBm, ...).
struct SystemConfig
{
    int E = 8;               // eMBB users
    int U = 65;              // URLLC users
    int N = 40;              // RIS elements
    int M = 7;               // mini-slots per slot
    int B = 96;              // resource blocks
    double W = 180e3;        // RB bandwidth [Hz]
    double tau = 0.143e-3;   // mini-slot duration [s]
    double packet_bits = 256.0;
    double P_BS = 1.9952623149688795; // 33 dBm [W]
    double sigma2 = 1.7782794100389228e-13; // -97.5 dBm [W]
    double eps_embb = 0.1;
    double eps_urllc = 1e-6;
    double delta = 0.1;
    double r_th = 1e6;       // eMBB minimum rate [bit/s]
    double lambda = 0.7 * 0.143; // URLLC arrivals per user per mini-slot (0.7 packet/ms)
    Geometry geometry{};
    PathLoss pathloss{};
    double kappa = 10.0;     // Rician factor of the BS -> RIS link
    int randomization_trials = 1000;
    std::uint64_t seed = 1;

    /// RBs owned by each eMBB user (B / E).
    [[nodiscard]] int rbs_per_user() const;
    /// Required URLLC rate zeta / tau [bit/s].
    [[nodiscard]] double c_th() const { return packet_bits / tau; }
    /// Per-RB eMBB rate floor r_th / ((1 - delta) b).
    [[nodiscard]] double embb_rate_floor() const;
};

/// Throws std::invalid_argument on out-of-range fields and InfeasibleConfig on
/// structurally impossible combinations.
void validate(const SystemConfig& cfg);

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);
double db_to_linear(double db);

} // namespace risurllc
