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

#include "risurllc/config.hpp"

#include <complex>
#include <random>
#include <span>
#include <vector>

namespace risurllc
{

using cplx = std::complex<double>;
using Rng = std::mt19937_64;

/// RIS reflection phases, one per element, each in [0, 2pi).
class PhaseConfig
{
public:
    PhaseConfig() = default;
    explicit PhaseConfig(std::vector<double> phases);
    static PhaseConfig zeros(int n) { return PhaseConfig(std::vector<double>(static_cast<std::size_t>(n), 0.0)); }

    [[nodiscard]] int size() const { return static_cast<int>(phases_.size()); }
    [[nodiscard]] std::span<const double> phases() const { return phases_; }
    [[nodiscard]] double operator[](int n) const { return phases_[static_cast<std::size_t>(n)]; }
    /// Unit-modulus reflection coefficients e^{j phi_n}.
    [[nodiscard]] std::vector<cplx> reflection() const;

    bool operator==(const PhaseConfig&) const = default;

private:
    std::vector<double> phases_;
};

/// Wraps any real angle into [0, 2pi).
double wrap_phase(double phi);

/// Channel coefficients of one drop.
struct ChannelRealization
{
    std::vector<cplx> h_bs_e;              // BS -> eMBB user
    std::vector<std::vector<cplx>> h_ris_e; // RIS -> eMBB user, N each
    std::vector<cplx> g_bs_u;              // BS -> URLLC user
    std::vector<std::vector<cplx>> g_ris_u; // RIS -> URLLC user, N each
    std::vector<cplx> f_bs_ris;            // BS -> RIS, N

    [[nodiscard]] int ris_elements() const { return static_cast<int>(f_bs_ris.size()); }
    [[nodiscard]] double embb_gain(int e, const PhaseConfig& phi) const;
    [[nodiscard]] double urllc_gain(int u, const PhaseConfig& phi) const;
};

/// Gamma = -ln(5 eps) / 0.45 (eMBB) or / 1.25 (URLLC). Requires 0 < eps < 0.2.
double snr_gap(double eps, Service service);

/// |direct + sum_n conj(cascade_n) e^{j phi_n} f_n|^2.
double effective_gain(cplx direct, std::span<const cplx> cascade, std::span<const cplx> f, const PhaseConfig& phi);

/// W log2(1 + p gain / (gamma sigma2)).
double rate_per_rb(double gain, double p, double w_rb, double gamma, double sigma2);

/// Deterministic unit-modulus line-of-sight component of the BS -> RIS link: a
/// half-wavelength uniform linear array with the BS at broadside.
std::vector<cplx> ris_los_component(int n);

/// Independent random streams used by one Monte Carlo trial. Splitting the
/// streams keeps the direct links identical when only N changes.
struct TrialStreams
{
    Rng placement;
    Rng ris_links;
    Rng arrivals;
    Rng randomization;

    static TrialStreams derive(std::uint64_t master_seed, std::uint64_t trial);
};

ChannelRealization sample_channels(const SystemConfig& cfg, Rng& placement_rng, Rng& ris_rng);

/// Convenience overload: draws both streams from one seed.
ChannelRealization sample_channels(const SystemConfig& cfg, std::uint64_t seed);

} // namespace risurllc
