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

#include "maxmin_pd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace risurllc::detail
{

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

// Largest alpha with X + alpha D still positive semidefinite.
double max_step(const MatrixXcd& x, const MatrixXcd& d)
{
    Eigen::LLT<MatrixXcd> llt(x);
    if (llt.info() != Eigen::Success)
        return 0.0;
    const MatrixXcd half = llt.matrixL().solve(d);
    MatrixXcd t = llt.matrixL().solve(half.adjoint()).adjoint();
    t = 0.5 * (t + t.adjoint()).eval();
    const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXcd>(t, Eigen::EigenvaluesOnly).eigenvalues()(0);
    return lmin < 0.0 ? -1.0 / lmin : inf;
}

double max_step(const VectorXd& x, const VectorXd& d)
{
    double a = inf;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (d(i) < 0.0)
            a = std::min(a, -x(i) / d(i));
    return a;
}

MatrixXcd herm(const MatrixXcd& a) { return 0.5 * (a + a.adjoint()); }

} // namespace

MaxMinResult solve_maxmin(const std::vector<VectorXcd>& w, const MaxMinOptions& options)
{
    if (w.empty())
        throw std::invalid_argument("solve_maxmin: no constraints");
    const Eigen::Index n = w.front().size();
    if (n < 1)
        throw std::invalid_argument("solve_maxmin: empty vectors");
    const auto u_count = static_cast<Eigen::Index>(w.size());

    MaxMinResult out;
    double g0 = inf;
    for (const auto& v : w)
    {
        if (v.size() != n)
            throw std::invalid_argument("solve_maxmin: vectors have different lengths");
        g0 = std::min(g0, v.squaredNorm());
    }
    if (!(g0 > 0.0))
    {
        // Some user has no channel at all: the optimum is t = 0 for every S.
        out.s = MatrixXcd::Identity(n, n);
        out.converged = true;
        return out;
    }

    // Row u reads  wh_u^H S wh_u - kappa_u t - x_u = 0  with unit-norm wh_u and
    // t measured in units of the weakest user's |w|^2; rows U.. fix diag(S) = 1.
    const Eigen::Index m = u_count + n;
    MatrixXcd v = MatrixXcd::Zero(n, m);
    VectorXd kappa(u_count);
    for (Eigen::Index u = 0; u < u_count; ++u)
    {
        const double nrm2 = w[static_cast<std::size_t>(u)].squaredNorm();
        v.col(u) = w[static_cast<std::size_t>(u)] / std::sqrt(nrm2);
        kappa(u) = g0 / nrm2;
    }
    for (Eigen::Index i = 0; i < n; ++i)
        v(i, u_count + i) = 1.0;
    VectorXd a = VectorXd::Zero(m);
    a.head(u_count) = -kappa;
    VectorXd b = VectorXd::Zero(m);
    b.tail(n).setOnes();

    MatrixXcd x = MatrixXcd::Identity(n, n);
    VectorXd xl = VectorXd::Ones(u_count);
    double t = 0.0;
    VectorXd y = VectorXd::Zero(m);
    MatrixXcd z = MatrixXcd::Identity(n, n);
    VectorXd zl = VectorXd::Ones(u_count);
    const double cone_dim = static_cast<double>(n + u_count);
    double best_merit = inf;
    int stalled = 0;

    auto op = [&](const MatrixXcd& k) { // A_S(K): Re v_j^H K v_j
        const MatrixXcd kv = k * v;
        VectorXd r(m);
        for (Eigen::Index j = 0; j < m; ++j)
            r(j) = v.col(j).dot(kv.col(j)).real();
        return r;
    };
    auto adj = [&](const VectorXd& yy) -> MatrixXcd { return v * yy.asDiagonal() * v.adjoint(); };

    for (int it = 0; it < options.max_iterations; ++it)
    {
        out.iterations = it + 1;
        // Residuals.
        VectorXd rp = b - op(x);
        rp.head(u_count) += xl + kappa * t;
        const MatrixXcd rs = herm(-adj(y) - z);
        const VectorXd rl = y.head(u_count) - zl;
        const double rf = -1.0 - a.dot(y);
        const double mu = ((x * z).trace().real() + xl.dot(zl)) / cone_dim;

        const double pobj = -t;
        const double dobj = y.tail(n).sum();
        const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        const double pinf = rp.norm() / (1.0 + std::sqrt(static_cast<double>(n)));
        const double dinf = std::sqrt(rs.squaredNorm() + rl.squaredNorm() + rf * rf);
        if (gap < options.tol && pinf < options.tol && dinf < options.tol)
        {
            out.converged = true;
            break;
        }
        const double merit = std::max({gap, pinf, dinf});
        if (merit < 0.5 * best_merit)
        {
            best_merit = merit;
            stalled = 0;
        }
        else if (++stalled >= options.stall_limit)
            break;

        Eigen::LLT<MatrixXcd> zfac(z);
        if (zfac.info() != Eigen::Success)
            break;
        const MatrixXcd zinv = zfac.solve(MatrixXcd::Identity(n, n));

        const MatrixXcd p = v.adjoint() * x * v;
        const MatrixXcd g = v.adjoint() * zinv * v;
        MatrixXd schur = (p.array() * g.conjugate().array()).real().matrix();
        for (Eigen::Index u = 0; u < u_count; ++u)
            schur(u, u) += xl(u) / zl(u);
        schur = 0.5 * (schur + schur.transpose()).eval();
        const Eigen::LDLT<MatrixXd> sfac(schur);
        if (sfac.info() != Eigen::Success)
            break;
        const VectorXd sa = sfac.solve(a);
        const double asa = a.dot(sa);

        const MatrixXcd xrz = x * rs * zinv;
        struct Step
        {
            MatrixXcd dx, dz;
            VectorXd dxl, dzl, dy;
            double dt = 0.0;
        };
        // kc = R_c Z^-1 for the matrix block, rc for the LP block.
        auto direction = [&](const MatrixXcd& kc, const VectorXd& rc) {
            Step s;
            const MatrixXcd h = kc - xrz;
            VectorXd rhs = rp - op(h);
            for (Eigen::Index u = 0; u < u_count; ++u)
                rhs(u) += rc(u) / zl(u) - xl(u) * rl(u) / zl(u);
            const VectorXd sh = sfac.solve(rhs);
            s.dt = asa != 0.0 ? (a.dot(sh) - rf) / asa : 0.0;
            s.dy = sh - sa * s.dt;
            s.dz = herm(rs - adj(s.dy));
            s.dx = herm(h + x * adj(s.dy) * zinv);
            s.dzl = rl + s.dy.head(u_count);
            s.dxl = (rc - xl.cwiseProduct(s.dzl)).cwiseQuotient(zl);
            return s;
        };
        auto lengths = [&](const Step& s) {
            const double ap = std::min(max_step(x, s.dx), max_step(xl, s.dxl));
            const double ad = std::min(max_step(z, s.dz), max_step(zl, s.dzl));
            return std::pair{ap, ad};
        };

        // Predictor (affine scaling).
        const Step aff = direction(-x, -xl.cwiseProduct(zl));
        auto [ap_a, ad_a] = lengths(aff);
        ap_a = std::min(1.0, ap_a);
        ad_a = std::min(1.0, ad_a);
        const double mu_aff = (((x + ap_a * aff.dx) * (z + ad_a * aff.dz)).trace().real() +
                               (xl + ap_a * aff.dxl).dot(zl + ad_a * aff.dzl)) /
                              cone_dim;
        const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

        // Corrector.
        const MatrixXcd kc = sigma * mu * zinv - x - aff.dx * aff.dz * zinv;
        const VectorXd rc = VectorXd::Constant(u_count, sigma * mu) - xl.cwiseProduct(zl) -
                            aff.dxl.cwiseProduct(aff.dzl);
        const Step st = direction(kc, rc);
        const auto [ap_m, ad_m] = lengths(st);
        constexpr double fraction = 0.95; // stay this far inside the cone
        const double ap = std::min(1.0, fraction * ap_m);
        const double ad = std::min(1.0, fraction * ad_m);

        x = herm(x + ap * st.dx);
        xl += ap * st.dxl;
        t += ap * st.dt;
        y += ad * st.dy;
        z = herm(z + ad * st.dz);
        zl += ad * st.dzl;
    }

    // Unit diagonal by congruence keeps S PSD.
    const VectorXd dinv = x.diagonal().real().cwiseMax(std::numeric_limits<double>::min()).cwiseSqrt().cwiseInverse();
    out.s = dinv.asDiagonal() * x * dinv.asDiagonal();
    out.s = herm(out.s);
    out.s.diagonal().setOnes();

    out.lower = inf;
    for (const auto& wu : w)
        out.lower = std::min(out.lower, wu.dot(out.s * wu).real());

    // Dual certificate: any pi >= 0 with sum 1 and d with Diag(d) >= sum pi_u w_u w_u^H
    // bounds t from above by sum(d).
    VectorXd pi = y.head(u_count).cwiseMax(0.0).cwiseProduct(kappa);
    if (!(pi.sum() > 0.0))
    {
        pi.setZero();
        Eigen::Index weakest = 0;
        for (Eigen::Index u = 1; u < u_count; ++u)
            if (w[static_cast<std::size_t>(u)].squaredNorm() < w[static_cast<std::size_t>(weakest)].squaredNorm())
                weakest = u;
        pi(weakest) = 1.0;
    }
    pi /= pi.sum();
    MatrixXcd ymat = MatrixXcd::Zero(n, n);
    for (Eigen::Index u = 0; u < u_count; ++u)
        if (pi(u) > 0.0)
            ymat += pi(u) * w[static_cast<std::size_t>(u)] * w[static_cast<std::size_t>(u)].adjoint();
    VectorXd d = (-g0 * y.tail(n)).cwiseMax(0.0);
    const MatrixXcd slack = herm(MatrixXcd(d.cast<std::complex<double>>().asDiagonal()) - ymat);
    const double lmin =
        Eigen::SelfAdjointEigenSolver<MatrixXcd>(slack, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lmin < 0.0)
        d.array() += -lmin * (1.0 + 1e-12);
    out.upper = d.sum();
    return out;
}

} // namespace risurllc::detail
