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

#include <span>
#include <vector>

#include "orfel/detection_params.hpp"
#include "orfel/types.hpp"

namespace orfel {

/// Exhaustive desk-scale check that (users, products) forms an
/// [n, m, delta_t, rho]-coherent near bipartite core under the run's weight
/// constraint. Searches per-product witness centers by sliding a
/// span-2*delta_t window over that product's edge timestamps and
/// backtracking over the per-product choices.
///
/// Guarded: throws ConfigError when |users| * |products| > 10^4.
bool verify_definition(std::span<const VertexId> users,
                       std::span<const VertexId> products,
                       std::span<const Recommendation> edges,
                       const DetectionParams& params);

inline constexpr uint64_t kOracleGuard = 10'000;

}  // namespace orfel
