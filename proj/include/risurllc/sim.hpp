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

// Monte Carlo runner: traffic, per-trial slot simulation and sweep aggregation.

#include "risurllc/channel.hpp"
#include "risurllc/config.hpp"
#include "risurllc/scheduler.hpp"
#include "risurllc/urllc_alloc.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace risurllc
{

/// CSV scheme labels. no_ris runs scheme1 on the same drop with the RIS removed.
enum class SchemeId
{
    no_ris,
    scheme1,
    scheme2,
    scheme3,
    selected
};

std::string_view to_string(SchemeId s);

/// Packets arriving in one mini-slot: Poisson(cfg.lambda) per URLLC user,
/// numbered from `first_id` in user order.
UrllcBatch sample_arrivals(const SystemConfig& cfg, int U, Rng& rng, int first_id = 0);

struct Variant
{
    SchemeId scheme = SchemeId::selected;
    Strategy strategy = Strategy::pf;
    Allocator allocator = Allocator::heuristic;
};

struct TrialOptions
{
    bool timing = false; // record wall time of each allocation with arrivals
};

/// Raw per-trial counts for one variant.
struct TrialCounts
{
    long arrived = 0;
    long admitted = 0;
    double sum_rate = 0.0;      // sum_e b (1/M) sum_m R_e^m [bit/s]
    int embb_admitted = 0;
    int embb_users = 0;
    double worst_qos_ratio = 0.0; // min_e slot-average / (r_th / b); +inf without users
    std::vector<double> runtime_ms;
};

/// One slot for every variant on a shared drop and shared arrivals. Streams
/// come from TrialStreams::derive(master_seed, trial).
std::vector<TrialCounts> run_trial(const SystemConfig& cfg, std::span<const Variant> variants,
                                   std::uint64_t master_seed, std::uint64_t trial, const TrialOptions& options = {});

struct Metrics
{
    Variant variant;
    double eta = 1.0; // served / arrived over all trials; 1 when nothing arrived
    double eta_se = 0.0;
    double sum_rate = 0.0;
    double sum_rate_se = 0.0;
    double embb_admission = 0.0;
    double runtime_ms_mean = 0.0; // NaN unless timing was on
    double runtime_ms_p95 = 0.0;
    double worst_qos_ratio = 0.0;
    long arrived = 0;
    long admitted = 0;
    int trials = 0;
};

/// Reduces per-trial counts (in trial order) for one variant.
Metrics aggregate(const Variant& v, std::span<const TrialCounts> trials, bool timing);

/// Runs `trials` trials with `threads` workers; the result does not depend on the thread count.
std::vector<Metrics> run_point(const SystemConfig& cfg, std::span<const Variant> variants, int trials,
                               std::uint64_t seed, int threads = 1, const TrialOptions& options = {});

} // namespace risurllc
