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


#include "risurllc/phase_opt.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace risurllc;
using testutil::close_rel;

namespace
{

struct Instance
{
    std::vector<LiftedChannel> lifted;
    std::vector<std::vector<cplx>> cascade;
    std::vector<std::vector<cplx>> f;
    std::vector<cplx> direct;
};

Instance random_instance(Rng& rng, int users, int n, double cascade_scale = 1.0)
{
    Instance in;
    const auto f = testutil::cn_vec(rng, n);
    for (int u = 0; u < users; ++u)
    {
        in.cascade.push_back(testutil::cn_vec(rng, n, cascade_scale));
        in.f.push_back(f);
        in.direct.push_back(testutil::cn(rng));
        in.lifted.push_back(lift(in.cascade.back(), f, in.direct.back()));
    }
    return in;
}

void check_solution_invariants(const SdpSolution& sol)
{
    const auto n = sol.s.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        CHECK(std::abs(sol.s(i, i) - 1.0) <= 1e-6);
    CHECK((sol.s - sol.s.adjoint()).norm() <= 1e-9 * std::max(1.0, sol.s.norm()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(sol.s);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-6);
}

// Powers giving a per-user SNR near 10 with unit-scale channels.
std::vector<double> unit_snr_powers(const SystemConfig& cfg, int users)
{
    const double noise = snr_gap(cfg.eps_embb, Service::embb) * cfg.sigma2;
    return std::vector<double>(static_cast<std::size_t>(users), 10.0 * noise);
}

SystemConfig no_floor_config()
{
    SystemConfig cfg;
    cfg.r_th = 0.0;
    return cfg;
}

} // namespace

TEST_CASE("lift structure")
{
    SUBCASE("zero cascade reduces to the direct link")
    {
        const std::vector<cplx> zero(3, cplx(0.0));
        const std::vector<cplx> f{1.0, 2.0, 3.0};
        const LiftedChannel l = lift(zero, f, cplx(0.5, -1.0));
        CHECK(l.q.norm() == 0.0);
        CHECK(l.direct_power == doctest::Approx(1.25));
        CHECK(l.lifted_gain(Eigen::VectorXcd::Ones(4)) == doctest::Approx(1.25));
    }
    SUBCASE("one element by hand")
    {
        const std::vector<cplx> one{cplx(1.0)};
        const LiftedChannel l = lift(one, one, cplx(1.0));
        CHECK(l.lifted_gain(Eigen::VectorXcd::Ones(2)) == doctest::Approx(4.0));
    }
    SUBCASE("invariants and agreement with the direct formula")
    {
        Rng rng(1);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
        for (int trial = 0; trial < 100; ++trial)
        {
            const int n = 1 + static_cast<int>(rng() % 10);
            const auto c = testutil::cn_vec(rng, n);
            const auto f = testutil::cn_vec(rng, n);
            const cplx h = testutil::cn(rng);
            const LiftedChannel l = lift(c, f, h);
            CHECK(l.q.rows() == n + 1);
            CHECK((l.q - l.q.adjoint()).norm() <= 1e-14 * l.q.norm());
            CHECK(l.q(n, n) == cplx(0.0));
            Eigen::VectorXcd theta(n);
            for (int i = 0; i < n; ++i)
                theta(i) = std::conj(c[static_cast<std::size_t>(i)]) * f[static_cast<std::size_t>(i)];
            const Eigen::MatrixXcd top = theta.conjugate() * theta.transpose();
            CHECK((l.q.topLeftCorner(n, n) - top).norm() <= 1e-12 * std::max(1.0, top.norm()));

            Eigen::VectorXcd v(n + 1);
            std::vector<double> phases(static_cast<std::size_t>(n));
            const double rho = ang(rng);
            for (int i = 0; i < n; ++i)
            {
                const double a = ang(rng);
                v(i) = std::polar(1.0, a);
                phases[static_cast<std::size_t>(i)] = a - rho;
            }
            v(n) = std::polar(1.0, rho);
            const double direct = effective_gain(h, c, f, PhaseConfig(phases));
            CHECK(close_rel(l.lifted_gain(v), direct, 1e-10));
            CHECK(close_rel(min_gain(std::span(&l, 1), phases_from_lifted(v)), direct, 1e-10));
        }
    }
    CHECK_THROWS_AS(lift(std::vector<cplx>(2), std::vector<cplx>(3), cplx(0.0)), std::invalid_argument);
}

TEST_CASE("sum-rate relaxation")
{
    SUBCASE("no surface: direct links only")
    {
        const SystemConfig cfg = no_floor_config();
        Rng rng(2);
        Instance in = random_instance(rng, 3, 0);
        const auto p = unit_snr_powers(cfg, 3);
        const SdpSolution sol = solve_sumrate_sdp(in.lifted, p, cfg);
        const double noise = snr_gap(cfg.eps_embb, Service::embb) * cfg.sigma2;
        double expect = 0.0;
        for (std::size_t e = 0; e < 3; ++e)
            expect += std::log2(1.0 + p[e] * std::norm(in.direct[e]) / noise);
        CHECK(sol.status == SdpStatus::optimal);
        CHECK(sol.objective == doctest::Approx(expect).epsilon(1e-12));
    }

    SUBCASE("single user, single element: bound and recovery")
    {
        const SystemConfig cfg = no_floor_config();
        Rng rng(3);
        for (int trial = 0; trial < 10; ++trial)
        {
            Instance in = random_instance(rng, 1, 1);
            const auto p = unit_snr_powers(cfg, 1);
            const SdpSolution sol = solve_sumrate_sdp(in.lifted, p, cfg);
            check_solution_invariants(sol);
            const cplx t = std::conj(in.cascade[0][0]) * in.f[0][0];
            const PhaseConfig aligned({wrap_phase(std::arg(in.direct[0]) - std::arg(t))});
            const double closed = sum_spectral_efficiency(in.lifted, p, aligned, cfg);
            CHECK(sol.objective >= closed * (1.0 - 1e-9));
            Rng r2(trial);
            const auto best = gaussian_randomize(
                sol, [&](const PhaseConfig& phi) { return sum_spectral_efficiency(in.lifted, p, phi, cfg); }, 100, r2);
            CHECK(close_rel(best.objective, closed, 1e-6));
        }
    }

    SUBCASE("relaxation dominates random unit-modulus vectors")
    {
        const SystemConfig cfg = no_floor_config();
        Rng rng(4);
        for (int trial = 0; trial < 50; ++trial)
        {
            const int users = 1 + static_cast<int>(rng() % 3);
            const int n = 1 + static_cast<int>(rng() % 6);
            Instance in = random_instance(rng, users, n);
            const auto p = unit_snr_powers(cfg, users);
            const SdpSolution sol = solve_sumrate_sdp(in.lifted, p, cfg);
            check_solution_invariants(sol);
            CHECK(sol.status == SdpStatus::optimal);
            CHECK(sol.objective >= sol.primal_value - 1e-12);
            double best = 0.0;
            for (int k = 0; k < 1000; ++k)
                best = std::max(best, sum_spectral_efficiency(in.lifted, p, testutil::random_phases(rng, n), cfg));
            CHECK(sol.objective >= best);
        }
    }

    SUBCASE("rate floors")
    {
        SystemConfig cfg;
        cfg.E = 2;
        cfg.B = 24;
        cfg.delta = 0.0;
        Rng rng(5);
        Instance in = random_instance(rng, 2, 3);
        const double noise = snr_gap(cfg.eps_embb, Service::embb) * cfg.sigma2;
        // Floor SNR 2^(r_floor/W) - 1 with r_floor = r_th / b.
        const double floor_snr = std::exp2(cfg.embb_rate_floor() / cfg.W) - 1.0;
        SUBCASE("feasible floors hold at the relaxed optimum")
        {
            const std::vector<double> p(2, 4.0 * floor_snr * noise / 0.5);
            const SdpSolution sol = solve_sumrate_sdp(in.lifted, p, cfg);
            check_solution_invariants(sol);
            if (sol.status != SdpStatus::infeasible)
                for (std::size_t e = 0; e < 2; ++e)
                    CHECK(p[e] * in.lifted[e].relaxed_gain(sol.s) / noise >= floor_snr * (1.0 - 1e-9));
        }
        SUBCASE("unreachable floors are reported")
        {
            const std::vector<double> p(2, 1e-6 * floor_snr * noise);
            const SdpSolution sol = solve_sumrate_sdp(in.lifted, p, cfg);
            CHECK(sol.status == SdpStatus::infeasible);
        }
    }
}

TEST_CASE("max-min relaxation")
{
    SUBCASE("single user, single element")
    {
        Rng rng(6);
        for (int trial = 0; trial < 10; ++trial)
        {
            Instance in = random_instance(rng, 1, 1);
            const SdpSolution sol = solve_minmax_sdp(in.lifted);
            check_solution_invariants(sol);
            const double closed = std::pow(std::abs(in.direct[0]) + std::abs(in.cascade[0][0] * in.f[0][0]), 2);
            CHECK(sol.objective >= closed * (1.0 - 1e-9));
            Rng r2(trial);
            const auto best = gaussian_randomize(
                sol, [&](const PhaseConfig& phi) { return min_gain(in.lifted, phi); }, 100, r2);
            CHECK(close_rel(best.objective, closed, 1e-6));
        }
    }

    SUBCASE("zero cascades: t is the weakest direct gain")
    {
        Rng rng(7);
        Instance in = random_instance(rng, 4, 3, 0.0);
        const SdpSolution sol = solve_minmax_sdp(in.lifted);
        double weakest = 1e300;
        for (const cplx& h : in.direct)
            weakest = std::min(weakest, std::norm(h));
        CHECK(sol.objective == doctest::Approx(weakest).epsilon(1e-6));
    }

    SUBCASE("duplicated users do not change t")
    {
        Rng rng(8);
        Instance in = random_instance(rng, 1, 4);
        std::vector<LiftedChannel> twice{in.lifted[0], in.lifted[0]};
        const double a = solve_minmax_sdp(in.lifted).objective;
        const double b = solve_minmax_sdp(twice).objective;
        CHECK(close_rel(a, b, 1e-6));
    }

    SUBCASE("bound, feasibility and invariants on random instances")
    {
        Rng rng(9);
        for (int trial = 0; trial < 30; ++trial)
        {
            const int users = 1 + static_cast<int>(rng() % 6);
            const int n = 1 + static_cast<int>(rng() % 8);
            Instance in = random_instance(rng, users, n);
            const SdpSolution sol = solve_minmax_sdp(in.lifted);
            check_solution_invariants(sol);
            CHECK(sol.status == SdpStatus::optimal);
            double at_s = 1e300;
            for (const auto& l : in.lifted)
                at_s = std::min(at_s, l.relaxed_gain(sol.s));
            CHECK(sol.primal_value <= at_s * (1.0 + 1e-9));
            CHECK(sol.objective >= sol.primal_value);
            for (int k = 0; k < 200; ++k)
                CHECK(min_gain(in.lifted, testutil::random_phases(rng, n)) <= sol.objective * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("Gaussian randomization")
{
    Rng rng(10);
    Instance in = random_instance(rng, 3, 5);
    auto objective = [&](const PhaseConfig& phi) { return min_gain(in.lifted, phi); };

    SUBCASE("rank-one input returns its phase vector")
    {
        const PhaseConfig phi = testutil::random_phases(rng, 5);
        const Eigen::VectorXcd v = lifted_from_phases(phi);
        SdpSolution sol;
        sol.s = v * v.adjoint();
        Rng r2(1);
        const auto out = gaussian_randomize(sol, objective, 50, r2);
        CHECK(close_rel(out.objective, objective(phi), 1e-10));
        CHECK(out.evaluated == 1);
    }

    SUBCASE("more trials never hurt on a shared stream")
    {
        const SdpSolution sol = solve_minmax_sdp(in.lifted);
        Rng a(77), b(77);
        const auto one = gaussian_randomize(sol, objective, 1, a);
        const auto many = gaussian_randomize(sol, objective, 100, b);
        CHECK(many.objective >= one.objective);
        CHECK(many.objective <= sol.objective * (1.0 + 1e-9));
    }

    SUBCASE("deterministic for a fixed seed")
    {
        const SdpSolution sol = solve_minmax_sdp(in.lifted);
        Rng a(5), b(5);
        const auto x = gaussian_randomize(sol, objective, 40, a);
        const auto y = gaussian_randomize(sol, objective, 40, b);
        CHECK(x.phases == y.phases);
        CHECK(x.objective == y.objective);
    }

    SUBCASE("a global phase on the lifted vector does not matter")
    {
        std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
        for (int trial = 0; trial < 20; ++trial)
        {
            Eigen::VectorXcd v(6);
            for (int i = 0; i < 6; ++i)
                v(i) = std::polar(1.0, ang(rng));
            const cplx g = std::polar(1.0, ang(rng));
            const Eigen::VectorXcd w = g * v;
            CHECK(close_rel(objective(phases_from_lifted(v)), objective(phases_from_lifted(w)), 1e-10));
        }
    }

    CHECK_THROWS_AS(gaussian_randomize(SdpSolution{Eigen::MatrixXcd::Identity(2, 2)}, objective, 0, rng),
                    std::invalid_argument);
}
