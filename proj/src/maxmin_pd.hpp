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

// Primal-dual interior-point solver for the max-min gain relaxation
//
//   maximize t  subject to  w_u^H S w_u >= t (all u),  diag(S) = 1,  S >= 0,
//
// using the HKM search direction with Mehrotra's predictor-corrector. The
// rank-one constraint structure gives the Schur complement as an elementwise
// product of two small Gram matrices. Internal header; not installed.

#include <Eigen/Dense>

#include <vector>

namespace risurllc::detail
{

struct MaxMinOptions
{
    double tol = 1e-10; // relative gap and infeasibility target
    int max_iterations = 60;
    int stall_limit = 4; // stop after this many iterations without a better certified gap
};

struct MaxMinResult
{
    Eigen::MatrixXcd s;    // unit diagonal, PSD
    double lower = 0.0;    // min_u w_u^H S w_u at the returned S
    double upper = 0.0;    // certified bound from a dual feasible point
    int iterations = 0;
    bool converged = false; // internal tolerances met
};

/// All vectors must share one length n >= 1; at least one must be nonzero.
MaxMinResult solve_maxmin(const std::vector<Eigen::VectorXcd>& w, const MaxMinOptions& options = {});

} // namespace risurllc::detail
