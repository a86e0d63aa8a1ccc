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

#include <cstdint>

#include "orfel/types.hpp"

namespace orfel {

struct DetectionParams {
    uint32_t min_users = 10;          // n: minimum users for a valid lockstep
    uint32_t min_products = 5;        // m: minimum products; also the growth cap
    double rho = 0.8;                 // tolerance fraction in (0, 1]
    uint64_t delta_t = 86400;         // half-window width, seconds
    uint8_t kappa = 4;                // weight threshold
    Mode mode = Mode::Promotion;
    uint32_t n_seeds = 1;
    uint64_t rng_seed = 1;
    uint32_t initial_users_per_seed = 3;

    void validate() const {
        if (min_users < 1) throw ConfigError("n must be >= 1");
        if (min_products < 1) throw ConfigError("m must be >= 1");
        if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("rho must be in (0, 1]");
        if (delta_t == 0) throw ConfigError("deltaT must be > 0");
        if (n_seeds < 1) throw ConfigError("nSeeds must be >= 1");
        if (initial_users_per_seed < 1) throw ConfigError("initialUsersPerSeed must be >= 1");
        if (kappa < 1) throw ConfigError("kappa must be >= 1");
    }
};

}  // namespace orfel
