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

#include <map>
#include <string>
#include <vector>

#include "orfel/engine.hpp"
#include "orfel/types.hpp"

namespace orfel {

/// Dimensions of an injected lockstep attack.
struct AttackSpec {
    uint32_t n_users = 0;
    uint32_t n_products = 0;
    uint64_t delta_t = 86400;
    Mode mode = Mode::Promotion;
    uint8_t kappa = 4;
    uint32_t count = 1;

    void validate() const {
        if (n_users < 1 || n_products < 1) throw ConfigError("attack needs >= 1 user and product");
        if (delta_t == 0) throw ConfigError("attack deltaT must be > 0");
        if (kappa < 1 || kappa > 5) throw ConfigError("attack kappa must be in 1..5");
    }
};

/// One injected attack in ordinal space.
struct Attack {
    std::vector<VertexId> users;                 // sorted
    std::vector<VertexId> products;              // sorted
    std::map<VertexId, uint64_t> centers;        // product -> base timestamp
    Mode mode = Mode::Promotion;
};

struct GroundTruth {
    std::vector<Attack> attacks;
};

/// Same ground truth in original-id space, matching the ids a
/// DetectionReport carries.
struct NamedAttack {
    std::vector<std::string> users;
    std::vector<std::string> products;
    std::map<std::string, uint64_t> centers;
    Mode mode = Mode::Promotion;
};

struct NamedGroundTruth {
    std::vector<NamedAttack> attacks;
};

/// Synthetic bipartite graph in ordinal space.
struct SyntheticGraph {
    uint32_t num_users = 0;
    uint32_t num_products = 0;
    uint64_t ts_lo = 0;
    uint64_t ts_hi = 0;
    std::vector<Recommendation> edges;
};

/// Random bipartite graph: num_edges uniform (user, product) pairs, uniform
/// timestamps in [ts_lo, ts_hi], uniform weights 1..5. By default edges are
/// distinct pairs; with_replacement skips the deduplication.
SyntheticGraph generate_bipartite(uint32_t num_users, uint32_t num_products,
                                  uint64_t num_edges, uint64_t ts_lo, uint64_t ts_hi,
                                  uint64_t rng_seed, bool with_replacement = false);

/// Appends spec.count lockstep attacks to the graph: random existing users
/// and products; per product one base timestamp (uniform over the host
/// graph's observed range) and one rating drawn from the mode's passing
/// range; one edge per (user, product) at base plus a uniform variation in
/// [-delta_t, +delta_t]. Returns the injected ground truth.
GroundTruth inject_lockstep(SyntheticGraph& graph, const AttackSpec& spec, uint64_t rng_seed);

NamedGroundTruth name_ground_truth(const GroundTruth& truth,
                                   const std::vector<std::string>* user_ids,
                                   const std::vector<std::string>* product_ids);

struct AttackMatch {
    bool caught = false;
    int lockstep = -1;          // index into the evaluated lockstep list
    uint64_t user_overlap = 0;
    uint64_t product_overlap = 0;
};

struct RecallResult {
    uint64_t caught = 0;
    uint64_t total = 0;
    double recall = 0.0;
    double coverage = 0.8;
    std::vector<AttackMatch> per_attack;
};

/// An attack counts as caught when a single reported lockstep overlaps it by
/// at least coverage * min(attack side, lockstep side) on both the user and
/// the product side. The min makes the rule meaningful when the growth cap m
/// keeps reported locksteps smaller than the attack. Throws ConfigError on
/// empty ground truth.
RecallResult evaluate_recall(const std::vector<ReportedLockstep>& locksteps,
                             const NamedGroundTruth& truth, double coverage = 0.8);

/// Writes a synthetic graph in the text edge-list format understood by
/// ingest: "user,product,timestamp,weight" with ordinal decimal ids.
void write_edge_text(const SyntheticGraph& graph, const std::filesystem::path& path);

}  // namespace orfel
