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

#include "orfel/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

namespace orfel {

namespace {

// Retention cap for seed candidates on very high degree products; user draws
// then sample from the retained edges instead of the full adjacency.
constexpr size_t kSeedRetention = 65536;

constexpr size_t kBatchEdges = 1 << 18;

double mean_timestamp(const std::vector<CreditedEdge>& edges) {
    double sum = 0.0;
    for (const auto& e : edges) sum += static_cast<double>(e.timestamp);
    return sum / static_cast<double>(edges.size());
}

// Distinct users of a credited list that is grouped by user (scan order).
uint32_t distinct_users_grouped(const std::vector<CreditedEdge>& edges) {
    uint32_t n = 0;
    VertexId last = 0;
    bool have = false;
    for (const auto& e : edges) {
        if (!have || e.user != last) {
            ++n;
            last = e.user;
            have = true;
        }
    }
    return n;
}

std::vector<VertexId> distinct_user_list(const std::vector<CreditedEdge>& edges) {
    std::vector<VertexId> v;
    v.reserve(edges.size());
    for (const auto& e : edges) v.push_back(e.user);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Largest contiguous run of sorted timestamps spanning at most 2 * delta_t;
// ties resolved to the earliest window. Returns [begin, end).
std::pair<size_t, size_t> best_window(const std::vector<CreditedEdge>& sorted, uint64_t delta_t) {
    size_t best_l = 0, best_r = 0;  // empty
    size_t l = 0;
    uint64_t span = 2 * delta_t;
    for (size_t r = 0; r < sorted.size(); ++r) {
        while (sorted[r].timestamp - sorted[l].timestamp > span) ++l;
        if (r + 1 - l > best_r - best_l) {
            best_l = l;
            best_r = r + 1;
        }
    }
    return {best_l, best_r};
}

}  // namespace

uint64_t suggest_seeds(uint64_t num_edges) {
    if (num_edges < 10) num_edges = 10;
    return static_cast<uint64_t>(
        std::llround(1000.0 * std::log10(static_cast<double>(num_edges))));
}

DetectionEngine::DetectionEngine(const DetectionParams& params, uint64_t num_users,
                                 uint64_t num_products, const EngineOptions& opts)
    : params_(params), opts_(opts), num_users_(num_users), num_products_(num_products),
      rng_(params.rng_seed) {
    params_.validate();
    if (opts_.threads < 1) opts_.threads = 1;
    if (opts_.max_iterations < 1) opts_.max_iterations = 1;
}

void DetectionEngine::begin_seeding() {
    phase_ = Phase::Seeding;
    reservoir_.clear();
    eligible_products_seen_ = 0;
}

void DetectionEngine::visit_seed_product(VertexId product, std::span<const Recommendation> edges) {
    if (phase_ != Phase::Seeding) throw std::logic_error("engine: not in seeding phase");
    SeedCandidate cand;
    cand.product = product;
    for (const auto& e : edges) {
        if (!lambda_weight(e.weight, params_.kappa, params_.mode)) continue;
        if (cand.lambda_edges.size() < kSeedRetention)
            cand.lambda_edges.push_back({e.user, e.timestamp, e.weight});
    }
    if (cand.lambda_edges.empty()) return;

    // Reservoir sampling: uniform without replacement over eligible products.
    uint64_t k = eligible_products_seen_++;
    if (reservoir_.size() < params_.n_seeds) {
        reservoir_.push_back(std::move(cand));
    } else {
        uint64_t j = std::uniform_int_distribution<uint64_t>(0, k)(rng_);
        if (j < params_.n_seeds) reservoir_[j] = std::move(cand);
    }
}

void DetectionEngine::make_seed(const SeedCandidate& cand) {
    Lockstep c;
    c.id = static_cast<uint32_t>(locksteps_.size());

    std::vector<VertexId> distinct = distinct_user_list(cand.lambda_edges);
    uint32_t want = std::min<uint32_t>(params_.initial_users_per_seed,
                                       static_cast<uint32_t>(distinct.size()));
    // Partial Fisher-Yates for a uniform draw of `want` distinct users.
    for (uint32_t i = 0; i < want; ++i) {
        auto j = std::uniform_int_distribution<size_t>(i, distinct.size() - 1)(rng_);
        std::swap(distinct[i], distinct[j]);
    }
    distinct.resize(want);
    std::sort(distinct.begin(), distinct.end());

    std::vector<CreditedEdge> credited;
    for (const auto& e : cand.lambda_edges)
        if (std::binary_search(distinct.begin(), distinct.end(), e.user)) credited.push_back(e);
    for (VertexId u : distinct) c.users.insert(u);
    double center = mean_timestamp(credited);
    c.add_product(cand.product, center, std::move(credited));
    locksteps_.push_back(std::move(c));
}

void DetectionEngine::finish_seeding() {
    if (phase_ != Phase::Seeding) throw std::logic_error("engine: not in seeding phase");
    for (const auto& cand : reservoir_) make_seed(cand);
    // Too few eligible products: reuse them, drawing with replacement.
    if (!reservoir_.empty()) {
        while (locksteps_.size() < params_.n_seeds) {
            auto j = std::uniform_int_distribution<size_t>(0, reservoir_.size() - 1)(rng_);
            make_seed(reservoir_[j]);
        }
    }
    reservoir_.clear();
    live_seed_count_ = static_cast<uint32_t>(locksteps_.size());
    death_iteration_.assign(locksteps_.size(), 0);
    phase_ = Phase::Idle;
}

void DetectionEngine::begin_iteration() {
    if (phase_ != Phase::Idle) throw std::logic_error("engine: iteration already open");
    ++iteration_;
    // Recount here so tests can inject lockstep state directly.
    death_iteration_.resize(locksteps_.size(), 0);
    live_seed_count_ = 0;
    user_index_.assign(num_users_, {});
    for (auto& c : locksteps_) {
        if (!c.alive) continue;
        ++live_seed_count_;
        c.take_snapshot();
        for (VertexId u : c.users) user_index_[u].push_back(c.id);
    }
    for (auto& v : user_index_) std::sort(v.begin(), v.end());
    product_scratch_.resize(opts_.threads);
    for (auto& s : product_scratch_) {
        s.per_lockstep.resize(locksteps_.size());
        s.touched.clear();
    }
    phase_ = Phase::Products;
}

void DetectionEngine::update_products(VertexId product, std::span<const Recommendation> edges) {
    if (phase_ != Phase::Products) throw std::logic_error("engine: not in product phase");
    update_products_worker(product, edges, 0, 1, product_scratch_[0]);
}

void DetectionEngine::update_products_worker(VertexId product,
                                             std::span<const Recommendation> edges,
                                             uint32_t worker, uint32_t num_workers,
                                             ProductScratch& scratch) {
    for (const auto& e : edges) {
        if (e.user >= user_index_.size()) continue;
        if (!lambda_weight(e.weight, params_.kappa, params_.mode)) continue;
        for (uint32_t cid : user_index_[e.user]) {
            if (num_workers > 1 && cid % num_workers != worker) continue;
            auto& bucket = scratch.per_lockstep[cid];
            if (bucket.empty()) scratch.touched.push_back(cid);
            bucket.push_back({e.user, e.timestamp, e.weight});
        }
    }
    for (uint32_t cid : scratch.touched) {
        auto& bucket = scratch.per_lockstep[cid];
        try_add_or_swap(locksteps_[cid], product, bucket);
        bucket.clear();
    }
    scratch.touched.clear();
}

void DetectionEngine::try_add_or_swap(Lockstep& c, VertexId product,
                                      std::vector<CreditedEdge>& credited) {
    if (c.has_product(product)) return;

    // Single-pass center over the member edges that pass lambda, then drop
    // the ones outside the window.
    double center = mean_timestamp(credited);
    std::vector<CreditedEdge> survivors;
    survivors.reserve(credited.size());
    for (const auto& e : credited) {
        if (std::abs(static_cast<double>(e.timestamp) - center) <=
            static_cast<double>(params_.delta_t))
            survivors.push_back(e);
    }
    if (survivors.empty()) return;

    double recomputed = mean_timestamp(survivors);

    if (c.products.size() < params_.min_products) {
        uint32_t covering = distinct_users_grouped(survivors);
        uint32_t need = coverage_required(params_.rho, c.users.size());
        if (need == 0 || covering < need) return;
        c.add_product(product, recomputed, std::move(survivors));
        c.iteration_of_last_change = iteration_;
        return;
    }

    // At the cap: swap out a product whose credited user set is a strict
    // subset of the candidate's; smallest such set, lowest ordinal on ties.
    // Products with at least as many distinct users as the candidate cannot
    // be strict subsets, so the count check rejects them without a scan.
    uint32_t cand_count = distinct_users_grouped(survivors);
    bool any_narrower = false;
    for (VertexId p : c.products) {
        auto it = c.member_user_count.find(p);
        if (it == c.member_user_count.end() || it->second < cand_count) {
            any_narrower = true;
            break;
        }
    }
    if (!any_narrower) return;

    std::vector<VertexId> cand_users = distinct_user_list(survivors);
    VertexId victim = 0;
    uint32_t victim_size = 0;
    bool found = false;
    for (VertexId p : c.products) {
        auto cit = c.member_user_count.find(p);
        uint32_t have = cit == c.member_user_count.end() ? 0 : cit->second;
        if (have >= cand_count) continue;  // cannot be a strict subset
        auto it = c.member_edges.find(p);
        bool subset = true;
        if (it != c.member_edges.end()) {
            for (const auto& e : it->second) {
                if (!std::binary_search(cand_users.begin(), cand_users.end(), e.user)) {
                    subset = false;
                    break;
                }
            }
        }
        if (!subset) continue;
        if (!found || have < victim_size || (have == victim_size && p < victim)) {
            victim = p;
            victim_size = have;
            found = true;
        }
    }
    if (!found) return;
    c.remove_product(victim);
    c.add_product(product, recomputed, std::move(survivors));
    c.iteration_of_last_change = iteration_;
}

void DetectionEngine::begin_user_phase() {
    if (phase_ != Phase::Products) throw std::logic_error("engine: not in product phase");
    product_index_.assign(num_products_, {});
    for (auto& c : locksteps_) {
        if (!c.alive) continue;
        for (VertexId p : c.products) product_index_[p].push_back(c.id);
    }
    for (auto& v : product_index_) std::sort(v.begin(), v.end());
    user_scratch_.resize(opts_.threads);
    for (auto& s : user_scratch_) {
        s.per_lockstep.resize(locksteps_.size());
        s.touched.clear();
    }
    phase_ = Phase::Users;
}

void DetectionEngine::update_users(VertexId user, std::span<const Recommendation> edges) {
    if (phase_ != Phase::Users) throw std::logic_error("engine: not in user phase");
    update_users_worker(user, edges, 0, 1, user_scratch_[0]);
}

void DetectionEngine::update_users_worker(VertexId user, std::span<const Recommendation> edges,
                                          uint32_t worker, uint32_t num_workers,
                                          UserScratch& scratch) {
    for (const auto& e : edges) {
        if (e.product >= product_index_.size()) continue;
        if (!lambda_weight(e.weight, params_.kappa, params_.mode)) continue;
        for (uint32_t cid : product_index_[e.product]) {
            if (num_workers > 1 && cid % num_workers != worker) continue;
            auto& bucket = scratch.per_lockstep[cid];
            if (bucket.empty()) scratch.touched.push_back(cid);
            bucket.push_back({e.product, e.timestamp, e.weight});
        }
    }
    double widened = 2.0 * static_cast<double>(params_.delta_t);
    for (uint32_t cid : scratch.touched) {
        auto& bucket = scratch.per_lockstep[cid];
        Lockstep& c = locksteps_[cid];
        if (c.has_user(user)) {
            bucket.clear();
            continue;
        }
        // Keep edges within the widened 2*delta_t window of their product's
        // center; the widening is what lets a seed explore its neighborhood.
        uint32_t covered = 0;
        VertexId last_counted = 0;
        bool have_counted = false;
        size_t kept = 0;
        for (size_t i = 0; i < bucket.size(); ++i) {
            const auto& ue = bucket[i];
            auto center = c.time_centers.find(ue.product);
            if (center == c.time_centers.end()) continue;
            if (std::abs(static_cast<double>(ue.timestamp) - center->second) > widened) continue;
            bucket[kept++] = ue;
            if (!have_counted || ue.product != last_counted) {
                ++covered;
                last_counted = ue.product;
                have_counted = true;
            }
        }
        bucket.resize(kept);
        uint32_t need = coverage_required(params_.rho, c.products.size());
        if (need > 0 && covered >= need) {
            c.users.insert(user);
            VertexId last_credited = 0;
            bool have_credited = false;
            for (const auto& ue : bucket) {
                c.member_edges[ue.product].push_back({user, ue.timestamp, ue.weight});
                if (!have_credited || ue.product != last_credited) {
                    ++c.member_user_count[ue.product];  // user was not a member before
                    last_credited = ue.product;
                    have_credited = true;
                }
            }
            c.iteration_of_last_change = iteration_;
        }
        bucket.clear();
    }
    scratch.touched.clear();
}

// End of iteration: per product, keep the densest span-2*delta_t run (ties:
// earliest) and recenter on the survivors' mean; then sweep out users whose
// remaining coverage fell below the rho threshold, purging their evidence.
// The kept run itself is the window witness: every credited edge lies within
// delta_t of the run's midpoint.
void DetectionEngine::settle_lockstep(Lockstep& c) {
    for (VertexId p : c.products) {
        auto it = c.member_edges.find(p);
        if (it == c.member_edges.end() || it->second.empty()) continue;
        auto& edges = it->second;
        std::sort(edges.begin(), edges.end(), [](const CreditedEdge& a, const CreditedEdge& b) {
            return std::tie(a.timestamp, a.user, a.weight) <
                   std::tie(b.timestamp, b.user, b.weight);
        });
        auto [l, r] = best_window(edges, params_.delta_t);
        std::vector<CreditedEdge> window(edges.begin() + static_cast<ptrdiff_t>(l),
                                         edges.begin() + static_cast<ptrdiff_t>(r));
        edges = std::move(window);
        c.member_user_count[p] = distinct_credited_users(edges);
        if (!edges.empty()) c.time_centers[p] = mean_timestamp(edges);
    }

    // Coverage sweep; purging removed users' evidence does not change the
    // coverage of the remaining members, so one more pass reaches the fixed
    // point. Coverage is counted in one pass over the credited edges.
    while (true) {
        uint32_t need = coverage_required(params_.rho, c.products.size());
        std::unordered_map<VertexId, uint32_t> cover;
        cover.reserve(c.users.size());
        std::unordered_set<VertexId> seen;
        for (VertexId p : c.products) {
            auto it = c.member_edges.find(p);
            if (it == c.member_edges.end()) continue;
            seen.clear();
            seen.reserve(it->second.size());
            for (const auto& e : it->second)
                if (seen.insert(e.user).second) ++cover[e.user];
        }
        std::vector<VertexId> removed;
        for (VertexId u : c.users) {
            auto it = cover.find(u);
            if ((it == cover.end() ? 0 : it->second) < need) removed.push_back(u);
        }
        if (removed.empty()) break;
        std::sort(removed.begin(), removed.end());
        for (VertexId u : removed) c.users.erase(u);
        for (VertexId p : c.products) {
            auto it = c.member_edges.find(p);
            if (it == c.member_edges.end() || it->second.empty()) continue;
            auto& edges = it->second;
            size_t kept = 0;
            for (size_t i = 0; i < edges.size(); ++i)
                if (!std::binary_search(removed.begin(), removed.end(), edges[i].user))
                    edges[kept++] = edges[i];
            if (kept == edges.size()) continue;
            edges.resize(kept);
            c.member_user_count[p] = distinct_credited_users(edges);
            if (!edges.empty()) c.time_centers[p] = mean_timestamp(edges);
        }
    }
}

void DetectionEngine::end_iteration() {
    if (phase_ != Phase::Users) throw std::logic_error("engine: not in user phase");
    for (auto& c : locksteps_) {
        if (!c.alive) continue;
        settle_lockstep(c);
        if (c.unchanged_since_snapshot()) {
            c.alive = false;
            death_iteration_[c.id] = iteration_;
            --live_seed_count_;
        }
    }
    objective_trace_.push_back(current_objective());
    phase_ = Phase::Idle;
}

uint64_t DetectionEngine::current_objective() const {
    return objective(std::span<const Lockstep>(locksteps_), params_);
}

void DetectionEngine::process_product_batch(std::span<const VertexSlice> slices,
                                            std::span<const Recommendation> pool) {
    if (opts_.threads <= 1) {
        for (const auto& s : slices)
            update_products_worker(s.vertex, pool.subspan(s.offset, s.count), 0, 1,
                                   product_scratch_[0]);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(opts_.threads);
    for (uint32_t w = 0; w < opts_.threads; ++w) {
        threads.emplace_back([&, w] {
            for (const auto& s : slices)
                update_products_worker(s.vertex, pool.subspan(s.offset, s.count), w,
                                       opts_.threads, product_scratch_[w]);
        });
    }
    for (auto& t : threads) t.join();
}

void DetectionEngine::process_user_batch(std::span<const VertexSlice> slices,
                                         std::span<const Recommendation> pool) {
    if (opts_.threads <= 1) {
        for (const auto& s : slices)
            update_users_worker(s.vertex, pool.subspan(s.offset, s.count), 0, 1,
                                user_scratch_[0]);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(opts_.threads);
    for (uint32_t w = 0; w < opts_.threads; ++w) {
        threads.emplace_back([&, w] {
            for (const auto& s : slices)
                update_users_worker(s.vertex, pool.subspan(s.offset, s.count), w, opts_.threads,
                                    user_scratch_[w]);
        });
    }
    for (auto& t : threads) t.join();
}

std::vector<const Lockstep*> DetectionEngine::qualifying_locksteps() const {
    // Dedupe identical (users, products); keep the lowest seed id.
    std::map<std::pair<std::vector<VertexId>, std::vector<VertexId>>, const Lockstep*> unique;
    for (const auto& c : locksteps_) {
        if (c.users.size() < params_.min_users) continue;
        if (c.products.size() < params_.min_products) continue;
        auto key = std::make_pair(c.sorted_users(), c.sorted_products());
        auto [it, inserted] = unique.emplace(std::move(key), &c);
        if (!inserted && c.id < it->second->id) it->second = &c;
    }
    std::vector<std::pair<uint64_t, const Lockstep*>> scored;
    scored.reserve(unique.size());
    for (const auto& [key, c] : unique) scored.emplace_back(c->sigma_sum(params_.rho), c);
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second->id < b.second->id;
    });
    std::vector<const Lockstep*> out;
    out.reserve(scored.size());
    for (const auto& [s, c] : scored) out.push_back(c);
    return out;
}

std::vector<ReportedLockstep> DetectionEngine::build_report(
    const std::vector<std::string>* user_ids, const std::vector<std::string>* product_ids) const {
    auto name_user = [&](VertexId u) {
        return user_ids ? (*user_ids)[u] : std::to_string(u);
    };
    auto name_product = [&](VertexId p) {
        return product_ids ? (*product_ids)[p] : std::to_string(p);
    };
    std::vector<ReportedLockstep> out;
    for (const Lockstep* c : qualifying_locksteps()) {
        ReportedLockstep r;
        for (VertexId u : c->sorted_users()) r.users.push_back(name_user(u));
        for (VertexId p : c->products) {
            r.products.push_back(name_product(p));
            auto it = c->time_centers.find(p);
            r.centers[name_product(p)] = it == c->time_centers.end() ? 0.0 : it->second;
        }
        r.mode = params_.mode;
        r.score = c->sigma_sum(params_.rho);
        r.iteration_converged = c->alive ? 0 : death_iteration_[c->id];
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

// Shared run loop over any pair of product/user scan drivers.
template <typename ScanProducts, typename ScanUsers>
DetectionReport run_core(ScanProducts&& scan_products, ScanUsers&& scan_users,
                         uint64_t num_users, uint64_t num_products, uint64_t num_edges,
                         const std::string& dataset_id, const DetectionParams& params,
                         const EngineOptions& opts, const IoCounters* io,
                         const std::vector<std::string>* user_ids,
                         const std::vector<std::string>* product_ids) {
    auto t0 = std::chrono::steady_clock::now();
    DetectionReport report;
    report.meta.params = params;
    report.meta.threads = opts.threads;
    report.meta.max_iterations = opts.max_iterations;
    report.meta.dataset_id = dataset_id;
    report.meta.num_users = num_users;
    report.meta.num_products = num_products;
    report.meta.num_edges = num_edges;

    DetectionEngine engine(params, num_users, num_products, opts);

    engine.begin_seeding();
    scan_products([&](VertexId v, std::span<const Recommendation> adj) {
        engine.visit_seed_product(v, adj);
    });
    engine.finish_seeding();
    report.meta.seeds_created = static_cast<uint32_t>(engine.locksteps().size());

    IoCounters last = io ? *io : IoCounters{};
    if (!engine.locksteps().empty()) {
        const bool batched = opts.threads > 1;
        std::vector<DetectionEngine::VertexSlice> slices;
        std::vector<Recommendation> pool;
        auto flush = [&](bool product_phase) {
            if (slices.empty()) return;
            if (product_phase)
                engine.process_product_batch(slices, pool);
            else
                engine.process_user_batch(slices, pool);
            slices.clear();
            pool.clear();
        };
        auto batch_visit = [&](bool product_phase) {
            return [&, product_phase](VertexId v, std::span<const Recommendation> adj) {
                if (!batched) {
                    if (product_phase)
                        engine.update_products(v, adj);
                    else
                        engine.update_users(v, adj);
                    return;
                }
                slices.push_back({v, pool.size(), static_cast<uint32_t>(adj.size())});
                pool.insert(pool.end(), adj.begin(), adj.end());
                if (pool.size() >= kBatchEdges) flush(product_phase);
            };
        };

        for (uint32_t it = 0; it < opts.max_iterations; ++it) {
            engine.begin_iteration();
            scan_products(batch_visit(true));
            flush(true);
            engine.begin_user_phase();
            scan_users(batch_visit(false));
            flush(false);
            engine.end_iteration();
            if (io) {
                report.meta.io_per_iteration.push_back(*io - last);
                last = *io;
            }
            if (engine.all_dead()) break;
        }
    }

    report.meta.iterations = engine.iteration();
    report.meta.converged = engine.all_dead();
    report.meta.seeds_dead =
        static_cast<uint32_t>(engine.locksteps().size()) - engine.live_seed_count();
    report.meta.objective_per_iteration = engine.objective_trace();
    if (io) report.meta.io_total = *io;
    report.locksteps = engine.build_report(user_ids, product_ids);
    report.meta.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace

DetectionReport run_detection(const BipartiteGraph& graph, const DetectionParams& params,
                              const EngineOptions& opts) {
    graph.reset_io();
    return run_core([&](const ScanVisitor& v) { graph.scan_products(v); },
                    [&](const ScanVisitor& v) { graph.scan_users(v); }, graph.num_users(),
                    graph.num_products(), graph.num_edges(), graph.manifest().dataset_id, params,
                    opts, &graph.io(), &graph.user_ids(), &graph.product_ids());
}

DetectionReport run_detection_in_memory(std::span<const Recommendation> edges,
                                        uint64_t num_users, uint64_t num_products,
                                        const DetectionParams& params, const EngineOptions& opts,
                                        const std::vector<std::string>* user_ids,
                                        const std::vector<std::string>* product_ids) {
    std::vector<Recommendation> by_product(edges.begin(), edges.end());
    std::sort(by_product.begin(), by_product.end(),
              [](const Recommendation& a, const Recommendation& b) {
                  return std::tie(a.product, a.user, a.timestamp, a.weight) <
                         std::tie(b.product, b.user, b.timestamp, b.weight);
              });
    std::vector<Recommendation> by_user(edges.begin(), edges.end());
    std::sort(by_user.begin(), by_user.end(),
              [](const Recommendation& a, const Recommendation& b) {
                  return std::tie(a.user, a.product, a.timestamp, a.weight) <
                         std::tie(b.user, b.product, b.timestamp, b.weight);
              });

    Fnv1a64 hash;
    unsigned char rec[kRecordBytes];
    for (const auto& e : by_product) {
        detail::encode_record(e, rec);
        hash.update(rec, kRecordBytes);
    }

    auto emit_runs = [](const std::vector<Recommendation>& sorted, bool product_major,
                        const ScanVisitor& visitor) {
        size_t i = 0;
        while (i < sorted.size()) {
            size_t j = i;
            VertexId v = product_major ? sorted[i].product : sorted[i].user;
            while (j < sorted.size() && (product_major ? sorted[j].product : sorted[j].user) == v)
                ++j;
            visitor(v, std::span<const Recommendation>(sorted.data() + i, j - i));
            i = j;
        }
    };

    return run_core(
        [&](const ScanVisitor& v) { emit_runs(by_product, true, v); },
        [&](const ScanVisitor& v) { emit_runs(by_user, false, v); }, num_users, num_products,
        edges.size(), hash.hex(), params, opts, nullptr, user_ids, product_ids);
}

}  // namespace orfel
