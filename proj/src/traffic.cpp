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


#include "risurllc/sim.hpp"

#include <stdexcept>

namespace risurllc
{

UrllcBatch sample_arrivals(const SystemConfig& cfg, int U, Rng& rng, int first_id)
{
    if (!(cfg.lambda >= 0.0) || U < 0)
        throw std::invalid_argument("sample_arrivals: lambda and U must be >= 0");
    UrllcBatch batch;
    batch.c_th = cfg.c_th();
    if (cfg.lambda == 0.0)
        return batch;
    std::poisson_distribution<int> arrivals(cfg.lambda);
    int id = first_id;
    for (int u = 0; u < U; ++u)
    {
        const int n = arrivals(rng);
        for (int i = 0; i < n; ++i)
            batch.packets.push_back({id++, u, cfg.packet_bits});
    }
    return batch;
}

} // namespace risurllc
