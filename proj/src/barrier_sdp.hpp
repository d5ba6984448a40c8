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

// Primal log-barrier path-following solver for the unit-diagonal SDPs that
// appear in RIS phase design. Every data term is a rank-one quadratic form
// y_j(S) = w_j^H S w_j, which keeps the Newton system at size n + J + 1:
//
//   maximize   sum_e weight_e * ln(1 + y_e(S))  [+ t]
//   subject to y_k(S) - lb_k - d_k t >= 0,  diag(S) = 1,  S > 0.
//
// Internal header; not installed.

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace risurllc::detail
{

struct LogTerm
{
    Eigen::VectorXcd w;
    double weight = 1.0;
};

struct QuadConstraint
{
    Eigen::VectorXcd w;
    double lower = 0.0;
    bool uses_t = false;
};

struct BarrierProblem
{
    int n = 0;
    std::vector<LogTerm> objective;
    std::vector<QuadConstraint> constraints;
    bool has_t = false; // maximize the free scalar t
};

struct BarrierOptions
{
    double rel_gap = 1e-9;   // target duality gap (relative)
    double accept_gap = 1e-5; // gap still reported as converged if rounding ends the path early
    double abs_gap = 1e-12;
    double tau0 = 1.0;
    double tau_growth = 10.0;
    int max_outer = 30;
    int max_newton = 60;
    /// Checked after each centering; returning true stops the path early.
    std::function<bool(const Eigen::MatrixXcd&, double)> stop_early;
};

struct BarrierResult
{
    Eigen::MatrixXcd s;
    double t = 0.0;
    double objective = 0.0; // sum weight ln(1+y) + t at the returned point
    double gap_bound = 0.0; // barrier parameter / tau at the last centered point
    int newton_steps = 0;
    bool converged = false;
    bool stopped_early = false;
};

/// s0 must be Hermitian positive definite with unit diagonal and, together
/// with t0, strictly satisfy every constraint.
BarrierResult solve_barrier(const BarrierProblem& problem, Eigen::MatrixXcd s0, double t0,
                            const BarrierOptions& options);

/// y = w^H S w (real part; S Hermitian).
double quad_form(const Eigen::VectorXcd& w, const Eigen::MatrixXcd& s);

} // namespace risurllc::detail
