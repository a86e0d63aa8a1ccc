/*
 * Copyright (c) 2026 The ORFEL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "orfel/scoring.hpp"

#include <unordered_set>

#include "orfel/lockstep.hpp"

namespace orfel {

uint64_t q_score(std::span<const UserEdge> user_edges, const Lockstep& lockstep,
                 const DetectionParams& params) {
    if (lockstep.products.empty()) return 0;
    std::unordered_set<VertexId> covered;
    for (const auto& e : user_edges) {
        if (!lockstep.has_product(e.product)) continue;
        if (!lambda_weight(e.weight, params.kappa, params.mode)) continue;
        auto center = lockstep.time_centers.find(e.product);
        if (center == lockstep.time_centers.end()) continue;
        if (!phi_within_window(center->second, static_cast<double>(e.timestamp),
                               static_cast<double>(params.delta_t)))
            continue;
        covered.insert(e.product);
    }
    uint64_t sigma = covered.size();
    uint32_t need = coverage_required(params.rho, lockstep.products.size());
    return (need > 0 && sigma >= need) ? sigma : 0;
}

uint64_t objective(std::span<const Lockstep> locksteps, const DetectionParams& params) {
    uint64_t total = 0;
    for (const auto& c : locksteps) total += c.sigma_sum(params.rho);
    return total;
}

}  // namespace orfel
