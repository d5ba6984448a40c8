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

#include "risurllc/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace risurllc
{

namespace
{
constexpr double two_pi = 2.0 * std::numbers::pi;

struct Point
{
    double x, y;
};

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point uniform_in_disk(double radius, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = radius * std::sqrt(unit(rng));
    const double theta = two_pi * unit(rng);
    return {r * std::cos(theta), r * std::sin(theta)};
}

// Unit-power circularly-symmetric complex Gaussian.
cplx cn01(Rng& rng)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

} // namespace

PhaseConfig::PhaseConfig(std::vector<double> phases) : phases_(std::move(phases))
{
    for (double& p : phases_)
    {
        if (!std::isfinite(p))
            throw std::invalid_argument("phase must be finite");
        p = wrap_phase(p);
    }
}

std::vector<cplx> PhaseConfig::reflection() const
{
    std::vector<cplx> v(phases_.size());
    for (std::size_t n = 0; n < phases_.size(); ++n)
        v[n] = std::polar(1.0, phases_[n]);
    return v;
}

double wrap_phase(double phi)
{
    double w = std::fmod(phi, two_pi);
    if (w < 0.0)
        w += two_pi;
    if (w >= two_pi)
        w = 0.0;
    return w;
}

double ChannelRealization::embb_gain(int e, const PhaseConfig& phi) const
{
    const auto i = static_cast<std::size_t>(e);
    return effective_gain(h_bs_e.at(i), h_ris_e.at(i), f_bs_ris, phi);
}

double ChannelRealization::urllc_gain(int u, const PhaseConfig& phi) const
{
    const auto i = static_cast<std::size_t>(u);
    return effective_gain(g_bs_u.at(i), g_ris_u.at(i), f_bs_ris, phi);
}

double snr_gap(double eps, Service service)
{
    if (!(eps > 0.0 && eps < 0.2))
        throw std::domain_error("snr_gap: eps must lie in (0, 0.2)");
    const double denom = service == Service::embb ? 0.45 : 1.25;
    return -std::log(5.0 * eps) / denom;
}

double effective_gain(cplx direct, std::span<const cplx> cascade, std::span<const cplx> f, const PhaseConfig& phi)
{
    if (cascade.size() != f.size() || static_cast<int>(f.size()) != phi.size())
        throw std::invalid_argument("effective_gain: length mismatch");
    cplx acc = direct;
    for (std::size_t n = 0; n < f.size(); ++n)
        acc += std::conj(cascade[n]) * std::polar(1.0, phi[static_cast<int>(n)]) * f[n];
    return std::norm(acc);
}

double rate_per_rb(double gain, double p, double w_rb, double gamma, double sigma2)
{
    if (gain < 0.0 || p < 0.0 || w_rb <= 0.0 || gamma <= 0.0 || sigma2 <= 0.0)
        throw std::invalid_argument("rate_per_rb: invalid argument");
    return w_rb * std::log2(1.0 + p * gain / (gamma * sigma2));
}

std::vector<cplx> ris_los_component(int n)
{
    // Element spacing lambda/2, arrival angle 0 (BS at broadside): e^{-j pi k sin(0)}.
    constexpr double arrival_angle = 0.0;
    std::vector<cplx> los(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        los[static_cast<std::size_t>(k)] = std::polar(1.0, -std::numbers::pi * k * std::sin(arrival_angle));
    return los;
}

TrialStreams TrialStreams::derive(std::uint64_t master_seed, std::uint64_t trial)
{
    auto make = [&](std::uint32_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                          static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32), stream};
        return Rng(seq);
    };
    return {make(1), make(2), make(3), make(4)};
}

ChannelRealization sample_channels(const SystemConfig& cfg, Rng& placement_rng, Rng& ris_rng)
{
    const Geometry& geo = cfg.geometry;
    const PathLoss& pl = cfg.pathloss;
    if (!(geo.coverage_radius_m > 0.0) || !(geo.bs_ris_distance_m > 0.0) || !(geo.min_distance_m > 0.0))
        throw std::domain_error("sample_channels: distances must be positive");
    if (cfg.E < 0 || cfg.U < 0 || cfg.N < 0)
        throw std::invalid_argument("sample_channels: negative user or element count");

    const Point bs{0.0, 0.0};
    const Point ris{geo.bs_ris_distance_m, 0.0};
    const auto n = static_cast<std::size_t>(cfg.N);
    auto clamp = [&](double d) { return std::max(d, geo.min_distance_m); };

    ChannelRealization ch;

    // Placement stream: positions and direct links only, so it is independent of N.
    auto place = [&](int count, std::vector<cplx>& direct, std::vector<Point>& where) {
        for (int i = 0; i < count; ++i)
        {
            const Point p = uniform_in_disk(geo.coverage_radius_m, placement_rng);
            const double d = clamp(distance(bs, p));
            direct.push_back(std::sqrt(pl.alpha0 * std::pow(d, -pl.rho0)) * cn01(placement_rng));
            where.push_back(p);
        }
    };
    std::vector<Point> embb_pos, urllc_pos;
    place(cfg.E, ch.h_bs_e, embb_pos);
    place(cfg.U, ch.g_bs_u, urllc_pos);

    // The cascade path loss alpha1 d1^-rho1 d2^-rho2 is split: the BS -> RIS vector carries
    // sqrt(alpha1 d1^-rho1), each RIS -> user vector carries sqrt(d2^-rho2).
    const double bs_ris_amp = std::sqrt(pl.alpha1 * std::pow(geo.bs_ris_distance_m, -pl.rho1));
    const std::vector<cplx> los = ris_los_component(cfg.N);
    ch.f_bs_ris.resize(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        const cplx nlos = cn01(ris_rng);
        cplx small;
        if (std::isinf(cfg.kappa))
            small = los[k];
        else
            small = std::sqrt(cfg.kappa / (1.0 + cfg.kappa)) * los[k] + std::sqrt(1.0 / (1.0 + cfg.kappa)) * nlos;
        ch.f_bs_ris[k] = bs_ris_amp * small;
    }

    auto ris_links = [&](const std::vector<Point>& where, std::vector<std::vector<cplx>>& out) {
        for (const Point& p : where)
        {
            const double amp = std::sqrt(std::pow(clamp(distance(ris, p)), -pl.rho2));
            std::vector<cplx> v(n);
            for (auto& x : v)
                x = amp * cn01(ris_rng);
            out.push_back(std::move(v));
        }
    };
    ris_links(embb_pos, ch.h_ris_e);
    ris_links(urllc_pos, ch.g_ris_u);
    return ch;
}

ChannelRealization sample_channels(const SystemConfig& cfg, std::uint64_t seed)
{
    TrialStreams s = TrialStreams::derive(seed, 0);
    return sample_channels(cfg, s.placement, s.ris_links);
}

} // namespace risurllc
