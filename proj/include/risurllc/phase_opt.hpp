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

// RIS phase design by semidefinite relaxation.
//
// A phase vector v (|v_n| = 1) is lifted to vbar = [v; rho] and the gain of a
// user becomes a Hermitian form: |h + sum_n theta_n v_n|^2 = vbar^H Q vbar + |h|^2
// for |rho| = 1, where theta_n = conj(cascade_n) f_n. The relaxation replaces
// vbar vbar^H by S with diag(S) = 1 and S >= 0.

#include "risurllc/channel.hpp"
#include "risurllc/config.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace risurllc
{

struct LiftedChannel
{
    /// (N+1)x(N+1) Hermitian, q = w w^H with the bottom-right entry zeroed.
    Eigen::MatrixXcd q;
    /// w = conj([theta; h]); the user's gain for a lifted S is w^H S w.
    Eigen::VectorXcd coupling;
    double direct_power = 0.0; // |h|^2

    [[nodiscard]] int elements() const { return static_cast<int>(coupling.size()) - 1; }
    /// vbar^H Q vbar + |h|^2.
    [[nodiscard]] double lifted_gain(const Eigen::VectorXcd& vbar) const;
    /// tr(Q S) + |h|^2 = w^H S w when diag(S) = 1.
    [[nodiscard]] double relaxed_gain(const Eigen::MatrixXcd& s) const;
};

enum class SdpStatus
{
    optimal,
    infeasible,
    max_iter
};

struct SdpSolution
{
    Eigen::MatrixXcd s;
    /// Certified upper bound on the relaxation optimum (primal value plus the
    /// barrier duality gap); never below the objective of a feasible phase vector.
    double objective = 0.0;
    /// Objective evaluated at s.
    double primal_value = 0.0;
    SdpStatus status = SdpStatus::optimal;
    int newton_steps = 0;
};

LiftedChannel lift(std::span<const cplx> cascade, std::span<const cplx> f, cplx direct);

/// Sum-rate relaxation: maximize sum_e log2(1 + p_e (tr(Q_e S) + |h_e|^2) / (Gamma sigma2))
/// subject to the per-user floor (1 - delta) b W log2(...) >= r_th. The objective is
/// reported in bit/s/Hz summed over users.
SdpSolution solve_sumrate_sdp(std::span<const LiftedChannel> lifted, std::span<const double> powers,
                              const SystemConfig& cfg);

/// Max-min relaxation: maximize t subject to tr(Q_u S) + |g_u|^2 >= t. Objective is t
/// in linear gain units.
SdpSolution solve_minmax_sdp(std::span<const LiftedChannel> lifted);

/// Objective of a phase configuration for randomization (larger is better).
using PhaseObjective = std::function<double(const PhaseConfig&)>;

struct RandomizedPhases
{
    PhaseConfig phases;
    double objective = 0.0;
    int evaluated = 0;
};

/// Eigenvalue ratio below which S is treated as rank one.
inline constexpr double rank_one_ratio = 1e-3;

/// Best-of-trials extraction: the leading eigenvector is always a candidate;
/// unless S is numerically rank one, `trials` Gaussian draws with covariance S
/// are projected to unit modulus and de-rotated by the last entry.
RandomizedPhases gaussian_randomize(const SdpSolution& sol, const PhaseObjective& objective, int trials, Rng& rng);

/// Phases encoded by a lifted vector: arg(vbar_n) - arg(vbar_{N+1}).
PhaseConfig phases_from_lifted(const Eigen::VectorXcd& vbar);

/// vbar = [e^{j phi}; 1].
Eigen::VectorXcd lifted_from_phases(const PhaseConfig& phi);

/// Objectives over a set of lifted users.
double min_gain(std::span<const LiftedChannel> lifted, const PhaseConfig& phi);
double sum_spectral_efficiency(std::span<const LiftedChannel> lifted, std::span<const double> powers,
                               const PhaseConfig& phi, const SystemConfig& cfg);

} // namespace risurllc
