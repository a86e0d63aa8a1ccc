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

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "orfel/detection_params.hpp"
#include "orfel/types.hpp"

namespace orfel {

struct Lockstep;

/// Weight threshold: promotion accepts weights at or above kappa,
/// defamation at or below. The boundary is inclusive in both modes, so a
/// weight equal to kappa counts for either.
inline bool lambda_weight(uint8_t weight, uint8_t kappa, Mode mode) {
    return mode == Mode::Promotion ? weight >= kappa : weight <= kappa;
}

/// Time-window indicator: true iff |center - t| <= delta_t, boundary inclusive.
inline bool phi_within_window(double center, double t, double delta_t) {
    return std::abs(center - t) <= delta_t;
}

/// Minimum member count for "at least rho percent of size". Ceiling, with a
/// small epsilon so that binary representation of rho (e.g. 0.8 * 5) does
/// not round 4.0000000000000002 up to 5.
inline uint32_t coverage_required(double rho, size_t size) {
    if (size == 0) return 0;
    return static_cast<uint32_t>(std::ceil(rho * static_cast<double>(size) - 1e-9));
}

/// One edge of a user restricted to a lockstep's products.
struct UserEdge {
    VertexId product = 0;
    uint64_t timestamp = 0;
    uint8_t weight = 0;
};

/// Per-user score sigma: the number of lockstep products this user
/// recommended within the product's time window and on the right side of
/// kappa. Returns sigma when it reaches the coverage threshold against the
/// current product-set size, 0 otherwise.
uint64_t q_score(std::span<const UserEdge> user_edges, const Lockstep& lockstep,
                 const DetectionParams& params);

/// Sum of member q scores over all locksteps, computed from the edges
/// currently credited to each lockstep. Used for monotonicity assertions
/// and reporting only.
uint64_t objective(std::span<const Lockstep> locksteps, const DetectionParams& params);

}  // namespace orfel
