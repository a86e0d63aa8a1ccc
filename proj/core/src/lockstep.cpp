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

#include "orfel/lockstep.hpp"

#include <algorithm>

#include "orfel/scoring.hpp"

namespace orfel {

uint32_t distinct_credited_users(const std::vector<CreditedEdge>& edges) {
    std::unordered_set<VertexId> seen;
    seen.reserve(edges.size());
    for (const auto& e : edges) seen.insert(e.user);
    return static_cast<uint32_t>(seen.size());
}

void Lockstep::add_product(VertexId p, double center, std::vector<CreditedEdge> credited) {
    products.push_back(p);
    product_set.insert(p);
    time_centers[p] = center;
    member_user_count[p] = distinct_credited_users(credited);
    member_edges[p] = std::move(credited);
}

void Lockstep::remove_product(VertexId p) {
    products.erase(std::remove(products.begin(), products.end(), p), products.end());
    product_set.erase(p);
    time_centers.erase(p);
    member_edges.erase(p);
    member_user_count.erase(p);
}

uint32_t Lockstep::coverage_of(VertexId user) const {
    uint32_t n = 0;
    for (VertexId p : products) {
        auto it = member_edges.find(p);
        if (it == member_edges.end()) continue;
        for (const auto& e : it->second) {
            if (e.user == user) {
                ++n;
                break;
            }
        }
    }
    return n;
}

uint64_t Lockstep::sigma_sum(double rho) const {
    if (users.empty() || products.empty()) return 0;
    // Distinct (user, product) credit counts.
    std::unordered_map<VertexId, uint32_t> coverage;
    coverage.reserve(users.size());
    for (VertexId p : products) {
        auto it = member_edges.find(p);
        if (it == member_edges.end()) continue;
        std::unordered_set<VertexId> seen;
        seen.reserve(it->second.size());
        for (const auto& e : it->second)
            if (seen.insert(e.user).second) ++coverage[e.user];
    }
    uint32_t need = coverage_required(rho, products.size());
    uint64_t total = 0;
    for (VertexId u : users) {
        auto it = coverage.find(u);
        uint32_t sigma = it == coverage.end() ? 0 : it->second;
        if (sigma >= need && need > 0) total += sigma;
    }
    return total;
}

std::vector<VertexId> Lockstep::sorted_users() const {
    std::vector<VertexId> v(users.begin(), users.end());
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<VertexId> Lockstep::sorted_products() const {
    std::vector<VertexId> v(products.begin(), products.end());
    std::sort(v.begin(), v.end());
    return v;
}

void Lockstep::take_snapshot() {
    snapshot_users = sorted_users();
    snapshot_products = sorted_products();
}

bool Lockstep::unchanged_since_snapshot() const {
    return snapshot_users == sorted_users() && snapshot_products == sorted_products();
}

}  // namespace orfel
