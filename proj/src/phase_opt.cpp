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

#include "barrier_sdp.hpp"
#include "maxmin_pd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace risurllc
{

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

double LiftedChannel::lifted_gain(const VectorXcd& vbar) const
{
    return (vbar.adjoint() * q * vbar).value().real() + direct_power;
}

double LiftedChannel::relaxed_gain(const MatrixXcd& s) const
{
    return (q * s).trace().real() + direct_power;
}

LiftedChannel lift(std::span<const cplx> cascade, std::span<const cplx> f, cplx direct)
{
    if (cascade.size() != f.size())
        throw std::invalid_argument("lift: length mismatch");
    const auto n = static_cast<Eigen::Index>(f.size());
    LiftedChannel out;
    out.coupling.resize(n + 1);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const cplx theta = std::conj(cascade[static_cast<std::size_t>(i)]) * f[static_cast<std::size_t>(i)];
        out.coupling(i) = std::conj(theta);
    }
    out.coupling(n) = std::conj(direct);
    out.direct_power = std::norm(direct);
    out.q = out.coupling * out.coupling.adjoint();
    out.q(n, n) = 0.0;
    return out;
}

PhaseConfig phases_from_lifted(const VectorXcd& vbar)
{
    const Eigen::Index n = vbar.size() - 1;
    if (n < 0)
        throw std::invalid_argument("phases_from_lifted: empty vector");
    const double ref = std::arg(vbar(n));
    std::vector<double> phi(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        phi[static_cast<std::size_t>(i)] = wrap_phase(std::arg(vbar(i)) - ref);
    return PhaseConfig(std::move(phi));
}

VectorXcd lifted_from_phases(const PhaseConfig& phi)
{
    VectorXcd v(phi.size() + 1);
    for (int i = 0; i < phi.size(); ++i)
        v(i) = std::polar(1.0, phi[i]);
    v(phi.size()) = 1.0;
    return v;
}

double min_gain(std::span<const LiftedChannel> lifted, const PhaseConfig& phi)
{
    const VectorXcd v = lifted_from_phases(phi);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& l : lifted)
        best = std::min(best, std::norm(l.coupling.dot(v)));
    return best;
}

double sum_spectral_efficiency(std::span<const LiftedChannel> lifted, std::span<const double> powers,
                               const PhaseConfig& phi, const SystemConfig& cfg)
{
    if (lifted.size() != powers.size())
        throw std::invalid_argument("sum_spectral_efficiency: size mismatch");
    const double noise = snr_gap(cfg.eps_embb, Service::embb) * cfg.sigma2;
    const VectorXcd v = lifted_from_phases(phi);
    double total = 0.0;
    for (std::size_t e = 0; e < lifted.size(); ++e)
        total += std::log2(1.0 + powers[e] * std::norm(lifted[e].coupling.dot(v)) / noise);
    return total;
}

namespace
{

constexpr double stationarity_tol = 1e-6;

void check_sizes(std::span<const LiftedChannel> lifted)
{
    if (lifted.empty())
        throw std::invalid_argument("SDP needs at least one lifted channel");
    const auto n = lifted.front().coupling.size();
    for (const auto& l : lifted)
        if (l.coupling.size() != n)
            throw std::invalid_argument("lifted channels have different sizes");
}

SdpStatus status_of(const detail::BarrierResult& r)
{
    return r.converged ? SdpStatus::optimal : SdpStatus::max_iter;
}

} // namespace

SdpSolution solve_sumrate_sdp(std::span<const LiftedChannel> lifted, std::span<const double> powers,
                              const SystemConfig& cfg)
{
    check_sizes(lifted);
    if (lifted.size() != powers.size())
        throw std::invalid_argument("solve_sumrate_sdp: one power per user required");
    const int n = static_cast<int>(lifted.front().coupling.size());
    const double noise = snr_gap(cfg.eps_embb, Service::embb) * cfg.sigma2;
    const double snr_floor = cfg.r_th > 0.0 ? std::exp2(cfg.embb_rate_floor() / cfg.W) - 1.0 : 0.0;

    // Work in SNR units: w' = sqrt(p/(Gamma sigma2)) w, so the objective is sum ln(1 + w'^H S w').
    std::vector<VectorXcd> scaled;
    scaled.reserve(lifted.size());
    for (std::size_t e = 0; e < lifted.size(); ++e)
    {
        if (powers[e] < 0.0)
            throw std::invalid_argument("solve_sumrate_sdp: negative power");
        scaled.push_back(std::sqrt(powers[e] / noise) * lifted[e].coupling);
    }

    SdpSolution out;
    auto finish = [&](const MatrixXcd& s) {
        out.s = s;
        out.objective = 0.0;
        for (const auto& w : scaled)
            out.objective += std::log2(1.0 + detail::quad_form(w, s));
    };

    MatrixXcd start = MatrixXcd::Identity(n, n);
    if (n == 1)
    {
        finish(start);
        out.primal_value = out.objective;
        for (const auto& w : scaled)
            if (snr_floor > 0.0 && detail::quad_form(w, start) < snr_floor)
                out.status = SdpStatus::infeasible;
        return out;
    }

    if (snr_floor > 0.0)
    {
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& w : scaled)
            worst = std::min(worst, detail::quad_form(w, start) / snr_floor - 1.0);
        if (!(worst > 1e-9))
        {
            // Phase one: maximize the smallest normalized floor margin until it turns positive.
            detail::BarrierProblem feas;
            feas.n = n;
            feas.has_t = true;
            for (const auto& w : scaled)
                feas.constraints.push_back({w / std::sqrt(snr_floor), 1.0, true});
            detail::BarrierOptions opt;
            opt.stop_early = [](const MatrixXcd&, double t) { return t > 1e-9; };
            const auto r = detail::solve_barrier(feas, start, worst - 1.0, opt);
            out.newton_steps += r.newton_steps;
            if (!r.stopped_early)
            {
                finish(r.s);
                out.primal_value = out.objective;
                out.status = SdpStatus::infeasible;
                return out;
            }
            start = r.s;
        }
    }

    detail::BarrierProblem prob;
    prob.n = n;
    for (const auto& w : scaled)
    {
        prob.objective.push_back({w, 1.0});
        if (snr_floor > 0.0)
            prob.constraints.push_back({w, snr_floor, false});
    }
    detail::BarrierOptions opt;
    const auto r = detail::solve_barrier(prob, start, 0.0, opt);
    out.newton_steps += r.newton_steps;
    finish(r.s);
    out.primal_value = out.objective;
    out.objective += r.gap_bound / std::numbers::ln2;
    out.status = status_of(r);
    return out;
}

SdpSolution solve_minmax_sdp(std::span<const LiftedChannel> lifted)
{
    check_sizes(lifted);
    std::vector<VectorXcd> w;
    w.reserve(lifted.size());
    for (const auto& l : lifted)
        w.push_back(l.coupling);
    const auto r = detail::solve_maxmin(w);
    SdpSolution out;
    out.s = r.s;
    out.primal_value = r.lower;
    out.objective = std::max(r.upper, r.lower);
    const bool tight = out.objective - out.primal_value <= stationarity_tol * std::abs(out.objective);
    out.status = r.converged || tight ? SdpStatus::optimal : SdpStatus::max_iter;
    out.newton_steps = r.iterations;
    return out;
}

RandomizedPhases gaussian_randomize(const SdpSolution& sol, const PhaseObjective& objective, int trials, Rng& rng)
{
    if (trials < 1)
        throw std::invalid_argument("gaussian_randomize: trials must be >= 1");
    const Eigen::Index n = sol.s.rows();
    if (n < 1 || sol.s.cols() != n)
        throw std::invalid_argument("gaussian_randomize: bad solution matrix");

    RandomizedPhases best;
    best.objective = -std::numeric_limits<double>::infinity();
    auto consider = [&](const VectorXcd& vbar) {
        PhaseConfig phi = phases_from_lifted(vbar);
        const double value = objective(phi);
        ++best.evaluated;
        if (value > best.objective)
        {
            best.objective = value;
            best.phases = std::move(phi);
        }
    };

    if (n == 1)
    {
        consider(VectorXcd::Ones(1));
        return best;
    }

    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(sol.s);
    const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0); // ascending
    const MatrixXcd& u = eig.eigenvectors();
    consider(u.col(n - 1));

    const double top = lambda(n - 1);
    if (!(top > 0.0) || lambda(n - 2) / top < rank_one_ratio)
        return best;

    const MatrixXcd factor = u * lambda.cwiseSqrt().asDiagonal();
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    VectorXcd r(n);
    for (int k = 0; k < trials; ++k)
    {
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            r(i) = cplx(re, im);
        }
        VectorXcd xi = factor * r;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double mag = std::abs(xi(i));
            xi(i) = mag > 0.0 ? xi(i) / mag : cplx(1.0, 0.0);
        }
        consider(xi);
    }
    return best;
}

} // namespace risurllc
