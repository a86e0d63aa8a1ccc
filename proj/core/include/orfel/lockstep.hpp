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
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "orfel/types.hpp"

namespace orfel {

/// One recommendation currently credited to a lockstep product.
struct CreditedEdge {
    VertexId user = 0;
    uint64_t timestamp = 0;
    uint8_t weight = 0;

    friend bool operator==(const CreditedEdge&, const CreditedEdge&) = default;
};

/// One seed's evolving state: user set U, ordered product list P, per-product
/// time centers and the credited evidence behind them.
struct Lockstep {
    uint32_t id = 0;
    std::unordered_set<VertexId> users;
    std::vector<VertexId> products;                 // insertion order, capped at m
    std::unordered_set<VertexId> product_set;       // same contents as products
    std::unordered_map<VertexId, double> time_centers;
    std::unordered_map<VertexId, std::vector<CreditedEdge>> member_edges;
    // Distinct credited users per product; kept in step with member_edges so
    // the swap search can reject wide products in O(1).
    std::unordered_map<VertexId, uint32_t> member_user_count;
    bool alive = true;
    uint32_t iteration_of_last_change = 0;

    // (users, products) at iteration start, sorted; basis of the dead-seed test.
    std::vector<VertexId> snapshot_users;
    std::vector<VertexId> snapshot_products;

    bool has_product(VertexId p) const { return product_set.count(p) != 0; }
    bool has_user(VertexId u) const { return users.count(u) != 0; }

    void add_product(VertexId p, double center, std::vector<CreditedEdge> credited);
    void remove_product(VertexId p);

    /// Number of products on which this user currently has credited evidence.
    uint32_t coverage_of(VertexId user) const;

    /// Sum of member q scores from the credited evidence: each member whose
    /// coverage reaches the rho threshold contributes its coverage, others 0.
    uint64_t sigma_sum(double rho) const;

    std::vector<VertexId> sorted_users() const;
    std::vector<VertexId> sorted_products() const;

    void take_snapshot();
    bool unchanged_since_snapshot() const;
};

uint32_t distinct_credited_users(const std::vector<CreditedEdge>& edges);

}  // namespace orfel
