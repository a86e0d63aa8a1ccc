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
#include <random>
#include <span>
#include <string>
#include <vector>

#include "orfel/detection_params.hpp"
#include "orfel/graph_store.hpp"
#include "orfel/lockstep.hpp"
#include "orfel/scoring.hpp"

namespace orfel {

struct EngineOptions {
    uint32_t threads = 1;
    uint32_t max_iterations = 100;
};

/// Seed-count heuristic: round(1000 * log10(numEdges)), numEdges floored at 10.
uint64_t suggest_seeds(uint64_t num_edges);

struct ReportedLockstep {
    std::vector<std::string> users;            // original ids, ordinal order
    std::vector<std::string> products;         // original ids, insertion order
    std::map<std::string, double> centers;     // product id -> time center
    Mode mode = Mode::Promotion;
    uint64_t score = 0;                        // sum of member q scores
    uint32_t iteration_converged = 0;          // 0 when still alive at the cap
};

struct RunMetadata {
    DetectionParams params;
    uint32_t threads = 1;
    uint32_t max_iterations = 100;
    std::string dataset_id;
    uint64_t num_users = 0;
    uint64_t num_products = 0;
    uint64_t num_edges = 0;
    uint32_t iterations = 0;
    bool converged = false;
    uint32_t seeds_created = 0;
    uint32_t seeds_dead = 0;
    std::vector<uint64_t> objective_per_iteration;
    IoCounters io_total;
    std::vector<IoCounters> io_per_iteration;
    // Wall clock is intentionally not serialized into report files: reports
    // from deterministic runs must be byte-identical across repetitions.
    double wall_clock_sec = 0.0;
};

struct DetectionReport {
    RunMetadata meta;
    std::vector<ReportedLockstep> locksteps;
};

/// The iterative search itself, exposed phase by phase. One iteration is
/// the sequence begin_iteration -> update_products for every product ->
/// begin_user_phase -> update_users for every user -> end_iteration.
/// Seeds that do not change over a whole iteration die and are frozen.
class DetectionEngine {
public:
    DetectionEngine(const DetectionParams& params, uint64_t num_users,
                    uint64_t num_products, const EngineOptions& opts = {});

    // -- Seeding --------------------------------------------------------
    void begin_seeding();
    void visit_seed_product(VertexId product, std::span<const Recommendation> edges);
    void finish_seeding();

    // -- One iteration ----------------------------------------------------
    void begin_iteration();
    void update_products(VertexId product, std::span<const Recommendation> edges);
    void begin_user_phase();
    void update_users(VertexId user, std::span<const Recommendation> edges);
    void end_iteration();

    // Batch entry points used by the scan drivers; they honor opts.threads
    // by partitioning locksteps across workers (one owner per lockstep).
    struct VertexSlice {
        VertexId vertex;
        uint64_t offset;   // into the batch edge pool
        uint32_t count;
    };
    void process_product_batch(std::span<const VertexSlice> slices,
                               std::span<const Recommendation> pool);
    void process_user_batch(std::span<const VertexSlice> slices,
                            std::span<const Recommendation> pool);

    // -- State ------------------------------------------------------------
    uint32_t iteration() const { return iteration_; }
    bool all_dead() const { return live_seed_count_ == 0; }
    uint32_t live_seed_count() const { return live_seed_count_; }
    const std::vector<Lockstep>& locksteps() const { return locksteps_; }
    std::vector<Lockstep>& locksteps() { return locksteps_; }
    const std::vector<uint64_t>& objective_trace() const { return objective_trace_; }
    uint64_t current_objective() const;

    /// Locksteps meeting the report bar (|users| >= n and |products| >= m),
    /// deduplicated on identical (users, products).
    std::vector<const Lockstep*> qualifying_locksteps() const;

    std::vector<ReportedLockstep> build_report(
        const std::vector<std::string>* user_ids,
        const std::vector<std::string>* product_ids) const;

private:
    enum class Phase { Idle, Seeding, Products, Users };

    struct SeedCandidate {
        VertexId product = 0;
        std::vector<CreditedEdge> lambda_edges;
    };
    struct ProductScratch {
        std::vector<std::vector<CreditedEdge>> per_lockstep;
        std::vector<uint32_t> touched;
    };
    struct UserScratch {
        std::vector<std::vector<UserEdge>> per_lockstep;
        std::vector<uint32_t> touched;
    };

    void make_seed(const SeedCandidate& cand);
    void update_products_worker(VertexId product, std::span<const Recommendation> edges,
                                uint32_t worker, uint32_t num_workers, ProductScratch& scratch);
    void update_users_worker(VertexId user, std::span<const Recommendation> edges,
                             uint32_t worker, uint32_t num_workers, UserScratch& scratch);
    void try_add_or_swap(Lockstep& c, VertexId product, std::vector<CreditedEdge>& credited);
    void settle_lockstep(Lockstep& c);

    DetectionParams params_;
    EngineOptions opts_;
    uint64_t num_users_ = 0;
    uint64_t num_products_ = 0;
    std::mt19937_64 rng_;
    Phase phase_ = Phase::Idle;
    uint32_t iteration_ = 0;
    uint32_t live_seed_count_ = 0;
    std::vector<Lockstep> locksteps_;
    std::vector<uint32_t> death_iteration_;

    // Seeding reservoir (uniform without replacement over eligible products).
    std::vector<SeedCandidate> reservoir_;
    uint64_t eligible_products_seen_ = 0;

    // Phase indexes over live locksteps only.
    std::vector<std::vector<uint32_t>> user_index_;      // user -> lockstep ids
    std::vector<std::vector<uint32_t>> product_index_;   // product -> lockstep ids

    std::vector<ProductScratch> product_scratch_;
    std::vector<UserScratch> user_scratch_;
    std::vector<uint64_t> objective_trace_;
};

/// Drives the engine over a preprocessed on-disk graph.
DetectionReport run_detection(const BipartiteGraph& graph, const DetectionParams& params,
                              const EngineOptions& opts = {});

/// Same search over an in-memory edge list; ids are the decimal ordinals
/// unless dictionaries are supplied. Used by tests and the tiny-instance
/// verification harness.
DetectionReport run_detection_in_memory(std::span<const Recommendation> edges,
                                        uint64_t num_users, uint64_t num_products,
                                        const DetectionParams& params,
                                        const EngineOptions& opts = {},
                                        const std::vector<std::string>* user_ids = nullptr,
                                        const std::vector<std::string>* product_ids = nullptr);

}  // namespace orfel
