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

#include "orfel/attack_gen.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <unordered_set>

namespace orfel {

namespace {

// Distinct draw of k values from [0, n) without materializing the range.
std::vector<VertexId> sample_distinct(uint32_t n, uint32_t k, std::mt19937_64& rng) {
    std::unordered_set<VertexId> seen;
    std::vector<VertexId> out;
    out.reserve(k);
    std::uniform_int_distribution<uint32_t> dist(0, n - 1);
    while (out.size() < k) {
        VertexId v = dist(rng);
        if (seen.insert(v).second) out.push_back(v);
    }
    return out;
}

}  // namespace

SyntheticGraph generate_bipartite(uint32_t num_users, uint32_t num_products, uint64_t num_edges,
                                  uint64_t ts_lo, uint64_t ts_hi, uint64_t rng_seed,
                                  bool with_replacement) {
    if (num_users == 0 || num_products == 0)
        throw ConfigError("generate: need at least one user and one product");
    if (ts_hi < ts_lo) throw ConfigError("generate: timestamp range is inverted");
    uint64_t cells = static_cast<uint64_t>(num_users) * num_products;
    if (!with_replacement && num_edges > cells)
        throw ConfigError("generate: more edges than user x product pairs");

    SyntheticGraph g;
    g.num_users = num_users;
    g.num_products = num_products;
    g.ts_lo = ts_lo;
    g.ts_hi = ts_hi;

    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<uint32_t> user_dist(0, num_users - 1);
    std::uniform_int_distribution<uint32_t> product_dist(0, num_products - 1);

    // Distinct (user, product) pairs via sort + unique top-up rounds; avoids
    // a giant hash set at the 10^7-edge scale.
    std::vector<uint64_t> keys;
    keys.reserve(num_edges);
    if (with_replacement) {
        for (uint64_t i = 0; i < num_edges; ++i)
            keys.push_back((static_cast<uint64_t>(user_dist(rng)) << 32) | product_dist(rng));
    } else {
        while (keys.size() < num_edges) {
            uint64_t missing = num_edges - keys.size();
            for (uint64_t i = 0; i < missing; ++i)
                keys.push_back((static_cast<uint64_t>(user_dist(rng)) << 32) |
                               product_dist(rng));
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        }
    }

    std::uniform_int_distribution<uint64_t> ts_dist(ts_lo, ts_hi);
    std::uniform_int_distribution<uint32_t> weight_dist(1, 5);
    g.edges.reserve(num_edges);
    for (uint64_t key : keys) {
        Recommendation r;
        r.user = static_cast<VertexId>(key >> 32);
        r.product = static_cast<VertexId>(key & 0xffffffffu);
        r.timestamp = ts_dist(rng);
        r.weight = static_cast<uint8_t>(weight_dist(rng));
        g.edges.push_back(r);
    }
    return g;
}

GroundTruth inject_lockstep(SyntheticGraph& graph, const AttackSpec& spec, uint64_t rng_seed) {
    spec.validate();
    if (spec.n_users > graph.num_users || spec.n_products > graph.num_products)
        throw ConfigError("inject: attack larger than the host graph");

    // Bases are drawn from the host graph's observed timestamp range so the
    // attacks are temporally camouflaged.
    uint64_t lo = graph.ts_lo, hi = graph.ts_hi;
    if (!graph.edges.empty()) {
        lo = hi = graph.edges.front().timestamp;
        for (const auto& e : graph.edges) {
            lo = std::min(lo, e.timestamp);
            hi = std::max(hi, e.timestamp);
        }
    }

    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<uint64_t> base_dist(lo, hi);
    std::uniform_int_distribution<int64_t> variation(-static_cast<int64_t>(spec.delta_t),
                                                     static_cast<int64_t>(spec.delta_t));
    // Ratings constrained to the mode's passing range; an attack with
    // failing weights would be undetectable by definition.
    uint32_t w_lo = spec.mode == Mode::Defamation ? 1 : spec.kappa;
    uint32_t w_hi = spec.mode == Mode::Defamation ? spec.kappa : 5;
    std::uniform_int_distribution<uint32_t> rating_dist(w_lo, w_hi);

    GroundTruth truth;
    for (uint32_t a = 0; a < spec.count; ++a) {
        Attack attack;
        attack.mode = spec.mode;
        attack.users = sample_distinct(graph.num_users, spec.n_users, rng);
        attack.products = sample_distinct(graph.num_products, spec.n_products, rng);
        for (VertexId p : attack.products) {
            uint64_t base = base_dist(rng);
            auto rating = static_cast<uint8_t>(rating_dist(rng));
            attack.centers[p] = base;
            for (VertexId u : attack.users) {
                int64_t v = variation(rng);
                uint64_t ts;
                if (v >= 0) {
                    ts = base + static_cast<uint64_t>(v);
                } else {
                    // Clamp at zero; the clamped edge is still within delta_t
                    // of the center.
                    uint64_t d = static_cast<uint64_t>(-v);
                    ts = base >= d ? base - d : 0;
                }
                graph.edges.push_back({u, p, ts, rating});
            }
        }
        std::sort(attack.users.begin(), attack.users.end());
        std::sort(attack.products.begin(), attack.products.end());
        truth.attacks.push_back(std::move(attack));
    }
    return truth;
}

NamedGroundTruth name_ground_truth(const GroundTruth& truth,
                                   const std::vector<std::string>* user_ids,
                                   const std::vector<std::string>* product_ids) {
    auto name_user = [&](VertexId u) { return user_ids ? (*user_ids)[u] : std::to_string(u); };
    auto name_product = [&](VertexId p) {
        return product_ids ? (*product_ids)[p] : std::to_string(p);
    };
    NamedGroundTruth out;
    for (const auto& a : truth.attacks) {
        NamedAttack n;
        n.mode = a.mode;
        for (VertexId u : a.users) n.users.push_back(name_user(u));
        for (VertexId p : a.products) n.products.push_back(name_product(p));
        for (const auto& [p, t] : a.centers) n.centers[name_product(p)] = t;
        out.attacks.push_back(std::move(n));
    }
    return out;
}

RecallResult evaluate_recall(const std::vector<ReportedLockstep>& locksteps,
                             const NamedGroundTruth& truth, double coverage) {
    if (truth.attacks.empty()) throw ConfigError("evaluate: ground truth has no attacks");
    if (!(coverage > 0.0 && coverage <= 1.0))
        throw ConfigError("evaluate: coverage must be in (0, 1]");

    RecallResult result;
    result.coverage = coverage;
    result.total = truth.attacks.size();

    std::vector<std::unordered_set<std::string>> ls_users, ls_products;
    ls_users.reserve(locksteps.size());
    for (const auto& l : locksteps) {
        ls_users.emplace_back(l.users.begin(), l.users.end());
        ls_products.emplace_back(l.products.begin(), l.products.end());
    }

    for (const auto& attack : truth.attacks) {
        AttackMatch match;
        for (size_t i = 0; i < locksteps.size(); ++i) {
            uint64_t uo = 0, po = 0;
            for (const auto& u : attack.users) uo += ls_users[i].count(u);
            for (const auto& p : attack.products) po += ls_products[i].count(p);
            uint64_t need_u = coverage_required(
                coverage, std::min(attack.users.size(), ls_users[i].size()));
            uint64_t need_p = coverage_required(
                coverage, std::min(attack.products.size(), ls_products[i].size()));
            bool hit = need_u > 0 && need_p > 0 && uo >= need_u && po >= need_p;
            if (hit && (!match.caught || uo + po > match.user_overlap + match.product_overlap)) {
                match.caught = true;
                match.lockstep = static_cast<int>(i);
                match.user_overlap = uo;
                match.product_overlap = po;
            }
        }
        if (match.caught) ++result.caught;
        result.per_attack.push_back(match);
    }
    result.recall = static_cast<double>(result.caught) / static_cast<double>(result.total);
    return result;
}

void write_edge_text(const SyntheticGraph& graph, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    std::string line;
    line.reserve(64);
    for (const auto& e : graph.edges) {
        line.clear();
        line += std::to_string(e.user);
        line += ',';
        line += std::to_string(e.product);
        line += ',';
        line += std::to_string(e.timestamp);
        line += ',';
        line += std::to_string(e.weight);
        line += '\n';
        out << line;
    }
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace orfel
