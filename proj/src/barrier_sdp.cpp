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

#include "barrier_sdp.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace risurllc::detail
{

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

double quad_form(const VectorXcd& w, const MatrixXcd& s) { return (w.adjoint() * s * w).value().real(); }

namespace
{

// Flattened view of the rank-one data: objective terms first, then constraints.
struct Terms
{
    MatrixXcd w;        // n x J
    VectorXd weight;    // objective weights (first n_obj entries)
    VectorXd lower;     // constraint lower bounds (last n_con entries)
    VectorXd uses_t;    // 0/1 per constraint
    int n_obj = 0;
    int n_con = 0;
};

Terms flatten(const BarrierProblem& p)
{
    Terms t;
    t.n_obj = static_cast<int>(p.objective.size());
    t.n_con = static_cast<int>(p.constraints.size());
    t.w.resize(p.n, t.n_obj + t.n_con);
    t.weight.resize(t.n_obj);
    t.lower.resize(t.n_con);
    t.uses_t.resize(t.n_con);
    for (int j = 0; j < t.n_obj; ++j)
    {
        const auto& term = p.objective[static_cast<std::size_t>(j)];
        if (term.w.size() != p.n)
            throw std::invalid_argument("barrier: objective vector has wrong length");
        t.w.col(j) = term.w;
        t.weight(j) = term.weight;
    }
    for (int k = 0; k < t.n_con; ++k)
    {
        const auto& c = p.constraints[static_cast<std::size_t>(k)];
        if (c.w.size() != p.n)
            throw std::invalid_argument("barrier: constraint vector has wrong length");
        t.w.col(t.n_obj + k) = c.w;
        t.lower(k) = c.lower;
        t.uses_t(k) = c.uses_t ? 1.0 : 0.0;
    }
    return t;
}

struct Evaluation
{
    double phi = 0.0;       // barrier-augmented objective
    double objective = 0.0; // data objective
};

std::optional<Evaluation> evaluate(const Terms& terms, bool has_t, const MatrixXcd& s, double t, double tau)
{
    Eigen::LLT<MatrixXcd> llt(s);
    if (llt.info() != Eigen::Success)
        return std::nullopt;
    double logdet = 0.0;
    const MatrixXcd& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < s.rows(); ++i)
    {
        const double d = l(i, i).real();
        if (!(d > 0.0))
            return std::nullopt;
        logdet += 2.0 * std::log(d);
    }
    const MatrixXcd sw = s * terms.w;
    double obj = has_t ? t : 0.0;
    for (int j = 0; j < terms.n_obj; ++j)
    {
        const double y = terms.w.col(j).dot(sw.col(j)).real();
        if (!(1.0 + y > 0.0))
            return std::nullopt;
        obj += terms.weight(j) * std::log1p(y);
    }
    double slack_log = 0.0;
    for (int k = 0; k < terms.n_con; ++k)
    {
        const int j = terms.n_obj + k;
        const double y = terms.w.col(j).dot(sw.col(j)).real();
        const double slack = y - terms.lower(k) - terms.uses_t(k) * t;
        if (!(slack > 0.0))
            return std::nullopt;
        slack_log += std::log(slack);
    }
    return Evaluation{tau * obj + logdet + slack_log, obj};
}

} // namespace

BarrierResult solve_barrier(const BarrierProblem& problem, MatrixXcd s, double t, const BarrierOptions& options)
{
    const int n = problem.n;
    if (s.rows() != n || s.cols() != n)
        throw std::invalid_argument("barrier: initial point has wrong size");
    const Terms terms = flatten(problem);
    const int n_obj = terms.n_obj;
    const int n_con = terms.n_con;
    const int n_terms = n_obj + n_con;
    const bool has_t = problem.has_t;
    const int dim = n + n_terms + (has_t ? 1 : 0);
    const double barrier_param = static_cast<double>(n + n_con);

    // Below this Newton decrement the iterate counts as centered.
    constexpr double centered_decrement = 1e-7;

    BarrierResult result;
    double tau = options.tau0;

    auto current = evaluate(terms, has_t, s, t, tau);
    if (!current)
        throw std::invalid_argument("barrier: initial point is not strictly feasible");

    // Last point known to be centered; the gap bound is only valid there.
    MatrixXcd s_ok = s;
    double t_ok = t;
    double gap_ok = std::numeric_limits<double>::infinity();
    double obj_ok = current->objective;

    for (int outer = 0; outer < options.max_outer; ++outer)
    {
        current = evaluate(terms, has_t, s, t, tau);
        if (!current)
            break;
        double decrement = 0.0;
        bool centered = false;
        for (int it = 0; it < options.max_newton; ++it)
        {
            const MatrixXcd p = s * terms.w;           // n x J
            const MatrixXcd c = terms.w.adjoint() * p; // J x J
            VectorXd y(n_terms);
            for (int j = 0; j < n_terms; ++j)
                y(j) = c(j, j).real();

            VectorXd g(n_terms);
            VectorXd extra(n_terms);
            double g_t = has_t ? tau : 0.0;
            for (int j = 0; j < n_obj; ++j)
            {
                const double inv = 1.0 / (1.0 + y(j));
                g(j) = tau * terms.weight(j) * inv;
                const double h = tau * terms.weight(j) * inv * inv;
                extra(j) = h > 0.0 ? 1.0 / h : 1e300;
            }
            for (int k = 0; k < n_con; ++k)
            {
                const int j = n_obj + k;
                const double slack = y(j) - terms.lower(k) - terms.uses_t(k) * t;
                g(j) = 1.0 / slack;
                extra(j) = slack * slack;
                g_t -= terms.uses_t(k) / slack;
            }

            const MatrixXd a = s.cwiseAbs2();
            const MatrixXd b = p.cwiseAbs2();
            const MatrixXd d = c.cwiseAbs2();

            MatrixXd kkt = MatrixXd::Zero(dim, dim);
            VectorXd rhs(dim);
            kkt.topLeftCorner(n, n) = a;
            kkt.block(0, n, n, n_terms) = b;
            kkt.block(n, 0, n_terms, n) = b.transpose();
            kkt.block(n, n, n_terms, n_terms) = d;
            kkt.block(n, n, n_terms, n_terms).diagonal() += extra;
            rhs.head(n) = b * g + s.diagonal().real();
            rhs.segment(n, n_terms) = d * g + y;
            if (has_t)
            {
                for (int k = 0; k < n_con; ++k)
                {
                    kkt(n + n_obj + k, dim - 1) = terms.uses_t(k);
                    kkt(dim - 1, n + n_obj + k) = terms.uses_t(k);
                }
                rhs(dim - 1) = -g_t;
            }

            // Symmetric diagonal equilibration: rows of strong users are many
            // orders of magnitude larger than the rest.
            VectorXd eq(dim);
            for (int i = 0; i < dim; ++i)
            {
                const double k = std::abs(kkt(i, i));
                eq(i) = k > 0.0 ? 1.0 / std::sqrt(k) : 1.0;
            }
            const MatrixXd kkt_eq = eq.asDiagonal() * kkt * eq.asDiagonal();
            const VectorXd sol = eq.cwiseProduct(kkt_eq.partialPivLu().solve(eq.cwiseProduct(rhs)));
            const VectorXd nu = sol.head(n);
            const VectorXd alpha = sol.segment(n, n_terms);
            const double dt = has_t ? sol(dim - 1) : 0.0;

            // ds = S X S with X = W diag(g - alpha) W^H + S^-1 - Diag(nu). Forming it
            // as L (L^H X L) L^H keeps the cancellation inside an O(1) matrix.
            Eigen::LLT<MatrixXcd> llt(s);
            const MatrixXcd lfac = llt.matrixL();
            const MatrixXcd wt = lfac.adjoint() * terms.w;
            MatrixXcd core = wt * (g - alpha).asDiagonal() * wt.adjoint()
                             - lfac.adjoint() * nu.asDiagonal() * lfac;
            core.diagonal().array() += 1.0;
            core = 0.5 * (core + core.adjoint()).eval();
            MatrixXcd ds = lfac * core * lfac.adjoint();
            ds = 0.5 * (ds + ds.adjoint()).eval();
            ds.diagonal().setZero();

            // Newton decrement as the Hessian norm of the step (a sum of squares,
            // so it stays accurate when the gradient terms are large).
            const MatrixXcd half = lfac.triangularView<Eigen::Lower>().solve(ds);
            const MatrixXcd scaled =
                lfac.triangularView<Eigen::Lower>().solve(half.adjoint()).adjoint();
            decrement = scaled.squaredNorm();
            const MatrixXcd dsw = ds * terms.w;
            for (int j = 0; j < n_obj; ++j)
            {
                const double dy = terms.w.col(j).dot(dsw.col(j)).real();
                decrement += dy * dy / extra(j);
            }
            for (int k = 0; k < n_con; ++k)
            {
                const int j = n_obj + k;
                const double dslack = terms.w.col(j).dot(dsw.col(j)).real() - terms.uses_t(k) * dt;
                decrement += dslack * dslack / extra(j);
            }

            ++result.newton_steps;
            if (!std::isfinite(decrement))
                break;
            if (std::abs(decrement) <= centered_decrement)
            {
                centered = true;
                break;
            }

            double step = 1.0;
            bool accepted = false;
            while (step > 1e-14)
            {
                MatrixXcd s_new = s + step * ds;
                s_new.diagonal().setOnes();
                const double t_new = t + step * dt;
                const auto next = evaluate(terms, has_t, s_new, t_new, tau);
                // Near the central path the full step is safe; skip the Armijo
                // test there since it is dominated by rounding at large tau.
                if (next && (decrement < 0.1 || next->phi >= current->phi + 0.01 * step * decrement))
                {
                    s = std::move(s_new);
                    t = t_new;
                    current = next;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted)
                break;
        }

        if (!centered)
            break;
        s_ok = s;
        t_ok = t;
        gap_ok = barrier_param / tau;
        obj_ok = current->objective;
        if (options.stop_early && options.stop_early(s, t))
        {
            result.stopped_early = true;
            break;
        }
        if (gap_ok <= options.rel_gap * std::abs(obj_ok) + options.abs_gap)
            break;
        tau *= options.tau_growth;
    }

    s = std::move(s_ok);
    t = t_ok;
    result.gap_bound = gap_ok;
    result.objective = obj_ok;
    result.converged = gap_ok <= options.accept_gap * std::abs(obj_ok) + options.abs_gap;
    result.s = std::move(s);
    result.t = t;
    return result;
}

} // namespace risurllc::detail
