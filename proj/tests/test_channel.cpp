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
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace risurllc;
using testutil::close_rel;

TEST_CASE("snr gap values")
{
    // -ln(0.5)/0.45 and -ln(5e-6)/1.25 evaluated independently.
    CHECK(snr_gap(0.1, Service::embb) == doctest::Approx(0.6931471805599453 / 0.45).epsilon(1e-12));
    CHECK(snr_gap(0.1, Service::embb) == doctest::Approx(1.5403).epsilon(1e-4));
    CHECK(snr_gap(1e-6, Service::urllc) == doctest::Approx(12.206072645530174 / 1.25).epsilon(1e-12));
    CHECK(snr_gap(1e-6, Service::urllc) == doctest::Approx(9.7645).epsilon(1e-4));
    CHECK_THROWS_AS(snr_gap(0.2, Service::embb), std::domain_error);
    CHECK_THROWS_AS(snr_gap(0.0, Service::urllc), std::domain_error);
    CHECK_THROWS_AS(snr_gap(-1.0, Service::urllc), std::domain_error);
}

TEST_CASE("effective gain small cases")
{
    const std::vector<cplx> zero(3, cplx(0.0));
    const std::vector<cplx> ones(3, cplx(1.0));
    CHECK(effective_gain(cplx(1.0), zero, ones, PhaseConfig::zeros(3)) == doctest::Approx(1.0));
    const std::vector<cplx> one{cplx(1.0)};
    CHECK(effective_gain(cplx(0.0), one, one, PhaseConfig::zeros(1)) == doctest::Approx(1.0));
    CHECK(effective_gain(cplx(1.0), one, one, PhaseConfig({std::numbers::pi})) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(effective_gain(cplx(1.0), one, ones, PhaseConfig::zeros(1)), std::invalid_argument);
}

TEST_CASE("rate per RB")
{
    CHECK(rate_per_rb(1.0, 0.0, 180e3, 1.0, 1.0) == 0.0);
    // p g / (Gamma sigma2) = 1 and 3.
    CHECK(rate_per_rb(2.0, 1.0, 180e3, 2.0, 1.0) == doctest::Approx(180e3));
    CHECK(rate_per_rb(3.0, 2.0, 180e3, 2.0, 1.0) == doctest::Approx(360e3));
    CHECK_THROWS(rate_per_rb(1.0, 1.0, 0.0, 1.0, 1.0));
}

TEST_CASE("phase wrap and 2 pi invariance")
{
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial)
    {
        const int n = 1 + static_cast<int>(rng() % 8);
        const auto c = testutil::cn_vec(rng, n);
        const auto f = testutil::cn_vec(rng, n);
        const cplx h = testutil::cn(rng);
        const PhaseConfig phi = testutil::random_phases(rng, n);
        std::vector<double> shifted(phi.phases().begin(), phi.phases().end());
        shifted[rng() % static_cast<std::size_t>(n)] += 2.0 * std::numbers::pi * static_cast<double>(1 + rng() % 3);
        const PhaseConfig phi2(shifted);
        for (double p : phi2.phases())
        {
            CHECK(p >= 0.0);
            CHECK(p < 2.0 * std::numbers::pi);
        }
        CHECK(close_rel(effective_gain(h, c, f, phi), effective_gain(h, c, f, phi2), 1e-10));
        for (const cplx& r : phi.reflection())
            CHECK(std::abs(r) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("single element: closed-form alignment matches a phase grid")
{
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial)
    {
        const std::vector<cplx> c{testutil::cn(rng)};
        const std::vector<cplx> f{testutil::cn(rng)};
        const cplx h = testutil::cn(rng);
        const double best_phase = wrap_phase(std::arg(h) - std::arg(std::conj(c[0]) * f[0]));
        const double closed = effective_gain(h, c, f, PhaseConfig({best_phase}));
        double grid = 0.0;
        for (int k = 0; k < 10000; ++k)
            grid = std::max(grid, effective_gain(h, c, f, PhaseConfig({2.0 * std::numbers::pi * k / 10000.0})));
        CHECK(closed >= grid * (1.0 - 1e-12));
        CHECK(close_rel(closed, grid, 1e-6));
        // |h| + |c f| squared.
        CHECK(close_rel(closed, std::pow(std::abs(h) + std::abs(c[0] * f[0]), 2), 1e-12));
    }
}

TEST_CASE("rate is concave in power")
{
    Rng rng(5);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        const double g = u(rng), p1 = u(rng), p2 = u(rng);
        const double mid = rate_per_rb(g, 0.5 * (p1 + p2), 1.0, 1.5, 0.1);
        CHECK(mid >= 0.5 * (rate_per_rb(g, p1, 1.0, 1.5, 0.1) + rate_per_rb(g, p2, 1.0, 1.5, 0.1)) - 1e-12);
    }
}

TEST_CASE("channel sampling")
{
    SystemConfig cfg;
    cfg.N = 16;
    cfg.U = 5;

    SUBCASE("deterministic given seed")
    {
        const auto a = sample_channels(cfg, 42);
        const auto b = sample_channels(cfg, 42);
        CHECK(a.h_bs_e == b.h_bs_e);
        CHECK(a.g_ris_u == b.g_ris_u);
        CHECK(a.f_bs_ris == b.f_bs_ris);
        const auto c = sample_channels(cfg, 43);
        CHECK(a.h_bs_e != c.h_bs_e);
    }

    SUBCASE("declared lengths")
    {
        const auto ch = sample_channels(cfg, 1);
        CHECK(ch.h_bs_e.size() == 8);
        CHECK(ch.h_ris_e.size() == 8);
        CHECK(ch.g_bs_u.size() == 5);
        CHECK(ch.g_ris_u.size() == 5);
        CHECK(ch.f_bs_ris.size() == 16);
        for (const auto& v : ch.h_ris_e)
            CHECK(v.size() == 16);
    }

    SUBCASE("pure LoS limit")
    {
        cfg.kappa = std::numeric_limits<double>::infinity();
        const auto ch = sample_channels(cfg, 9);
        const auto los = ris_los_component(cfg.N);
        const double amp = std::sqrt(cfg.pathloss.alpha1 * std::pow(cfg.geometry.bs_ris_distance_m, -cfg.pathloss.rho1));
        for (int n = 0; n < cfg.N; ++n)
            CHECK(std::abs(ch.f_bs_ris[static_cast<std::size_t>(n)] - amp * los[static_cast<std::size_t>(n)]) <
                  1e-15 * amp + 1e-300);
    }

    SUBCASE("Rayleigh BS-RIS power at kappa = 0")
    {
        cfg.kappa = 0.0;
        cfg.N = 50;
        cfg.U = 0;
        cfg.E = 1;
        cfg.B = 12;
        const double amp2 = cfg.pathloss.alpha1 * std::pow(cfg.geometry.bs_ris_distance_m, -cfg.pathloss.rho1);
        double acc = 0.0;
        long count = 0;
        for (std::uint64_t s = 0; s < 400; ++s)
        {
            const auto ch = sample_channels(cfg, s);
            for (const cplx& x : ch.f_bs_ris)
            {
                acc += std::norm(x) / amp2;
                ++count;
            }
        }
        CHECK(count >= 10000);
        CHECK(acc / static_cast<double>(count) == doctest::Approx(1.0).epsilon(0.02));
    }

    SUBCASE("cell-edge direct attenuation is below single-element cascade attenuation")
    {
        const double d = cfg.geometry.coverage_radius_m;
        const double direct = cfg.pathloss.alpha0 * std::pow(d, -cfg.pathloss.rho0);
        const double cascade = cfg.pathloss.alpha1 * std::pow(cfg.geometry.bs_ris_distance_m, -cfg.pathloss.rho1) *
                               std::pow(d - cfg.geometry.bs_ris_distance_m, -cfg.pathloss.rho2);
        CHECK(direct > cascade); // linear gains
    }

    SUBCASE("non-positive distances rejected")
    {
        cfg.geometry.bs_ris_distance_m = 0.0;
        CHECK_THROWS_AS(sample_channels(cfg, 1), std::domain_error);
    }
}

TEST_CASE("streams are split per purpose")
{
    SystemConfig cfg;
    cfg.N = 10;
    SystemConfig bare = cfg;
    bare.N = 0;
    auto s1 = TrialStreams::derive(7, 3);
    auto s2 = TrialStreams::derive(7, 3);
    const auto a = sample_channels(cfg, s1.placement, s1.ris_links);
    const auto b = sample_channels(bare, s2.placement, s2.ris_links);
    CHECK(a.h_bs_e == b.h_bs_e);
    CHECK(a.g_bs_u == b.g_bs_u);
}
