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

#include "orfel/definition_oracle.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "orfel/scoring.hpp"

namespace orfel {

namespace {

using Bits = std::vector<uint64_t>;

Bits make_bits(size_t n) { return Bits((n + 63) / 64, 0); }
void set_bit(Bits& b, size_t i) { b[i / 64] |= uint64_t(1) << (i % 64); }

bool is_subset(const Bits& a, const Bits& b) {  // a subset of b
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] & ~b[i]) return false;
    return true;
}

}  // namespace

// Feasibility search: for each product, the sets of users a single witness
// center can credit are exactly the maximal span-2*delta_t windows over that
// product's passing edge timestamps (one window anchored at each earliest
// instance; a center at anchor + delta_t credits the whole window). The
// definition holds iff one window per product can be chosen so that every
// user is credited on at least ceil(rho * |P|) products.
bool verify_definition(std::span<const VertexId> users, std::span<const VertexId> products,
                       std::span<const Recommendation> edges, const DetectionParams& params) {
    uint64_t cells = static_cast<uint64_t>(users.size()) * products.size();
    if (cells > kOracleGuard)
        throw ConfigError("verify_definition: instance larger than the desk-scale guard");

    if (products.size() < params.min_products) return false;
    if (users.size() < params.min_users) return false;

    std::unordered_map<VertexId, uint32_t> user_idx;
    for (size_t i = 0; i < users.size(); ++i) user_idx.emplace(users[i], i);
    std::unordered_map<VertexId, uint32_t> product_idx;
    for (size_t i = 0; i < products.size(); ++i) product_idx.emplace(products[i], i);

    // Passing instances per product: user-local index + timestamp.
    std::vector<std::vector<std::pair<uint64_t, uint32_t>>> instances(products.size());
    for (const auto& e : edges) {
        auto pu = user_idx.find(e.user);
        auto pp = product_idx.find(e.product);
        if (pu == user_idx.end() || pp == product_idx.end()) continue;
        if (!lambda_weight(e.weight, params.kappa, params.mode)) continue;
        instances[pp->second].emplace_back(e.timestamp, pu->second);
    }

    uint32_t need = coverage_required(params.rho, products.size());
    if (need == 0) need = 1;

    uint64_t span = 2 * params.delta_t;
    std::vector<std::vector<Bits>> candidates(products.size());
    for (size_t j = 0; j < products.size(); ++j) {
        auto& ins = instances[j];
        if (ins.empty()) continue;
        std::sort(ins.begin(), ins.end());
        std::vector<Bits> cands;
        size_t prev_r = 0;
        for (size_t l = 0; l < ins.size(); ++l) {
            size_t r = l;
            while (r + 1 < ins.size() && ins[r + 1].first - ins[l].first <= span) ++r;
            if (l > 0 && r <= prev_r) continue;  // instance-subset of the previous window
            prev_r = r;
            Bits b = make_bits(users.size());
            for (size_t k = l; k <= r; ++k) set_bit(b, ins[k].second);
            cands.push_back(std::move(b));
        }
        // Keep only user-set-maximal candidates.
        std::vector<Bits> maximal;
        for (size_t a = 0; a < cands.size(); ++a) {
            bool dominated = false;
            for (size_t b = 0; b < cands.size() && !dominated; ++b)
                if (a != b && is_subset(cands[a], cands[b]) &&
                    (!is_subset(cands[b], cands[a]) || b < a))
                    dominated = true;
            if (!dominated) maximal.push_back(cands[a]);
        }
        candidates[j] = std::move(maximal);
    }

    // Upper bound per user: products where the user appears in any candidate.
    std::vector<uint32_t> potential(users.size(), 0);
    std::vector<size_t> branch;
    for (size_t j = 0; j < products.size(); ++j) {
        if (candidates[j].empty()) continue;
        branch.push_back(j);
        Bits any = make_bits(users.size());
        for (const auto& c : candidates[j])
            for (size_t w = 0; w < any.size(); ++w) any[w] |= c[w];
        for (size_t u = 0; u < users.size(); ++u)
            if (any[u / 64] >> (u % 64) & 1) ++potential[u];
    }
    for (uint32_t p : potential)
        if (p < need) return false;

    std::sort(branch.begin(), branch.end(),
              [&](size_t a, size_t b) { return candidates[a].size() < candidates[b].size(); });

    std::vector<uint32_t> counts(users.size(), 0);
    size_t unsatisfied = users.size();

    // Depth-first over per-product window choices with a remaining-products
    // bound per user.
    std::function<bool(size_t)> descend = [&](size_t depth) -> bool {
        if (unsatisfied == 0) return true;
        if (depth == branch.size()) return false;
        size_t rem = branch.size() - depth;
        for (uint32_t u = 0; u < users.size(); ++u)
            if (counts[u] + rem < need) return false;
        for (const auto& cand : candidates[branch[depth]]) {
            std::vector<uint32_t> bumped;
            for (uint32_t u = 0; u < users.size(); ++u) {
                if (cand[u / 64] >> (u % 64) & 1) {
                    if (++counts[u] == need) --unsatisfied;
                    bumped.push_back(u);
                }
            }
            if (descend(depth + 1)) return true;
            for (uint32_t u : bumped)
                if (counts[u]-- == need) ++unsatisfied;
        }
        return false;
    };
    return descend(0);
}

}  // namespace orfel
