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

#include <array>
#include <istream>
#include <vector>

#include "orfel/types.hpp"

namespace orfel {

struct IngestOptions {
    char separator = ',';
    bool skip_header = false;
    // Column indices of user id, product id, timestamp, rating in each line.
    std::array<uint32_t, 4> columns = {0, 1, 2, 3};
    // Fraction of rejected lines above which ingestion fails hard.
    double max_rejected_fraction = 0.10;
};

/// Densely renumbered edges plus the id dictionaries needed to translate
/// detections back to the original identifiers.
struct EdgeBuffer {
    std::vector<Recommendation> edges;
    std::vector<std::string> user_ids;     // ordinal -> original id
    std::vector<std::string> product_ids;
    uint64_t total_lines = 0;              // data lines seen (header excluded)
    uint64_t rejected_lines = 0;           // malformed or out-of-range rating
    uint64_t duplicate_edges = 0;          // records whose (user, product) pair repeats
    bool empty_input = false;

    uint32_t num_users() const { return static_cast<uint32_t>(user_ids.size()); }
    uint32_t num_products() const { return static_cast<uint32_t>(product_ids.size()); }
};

/// Parses a line-oriented edge list into dense ordinals. Duplicate
/// (user, product) pairs are kept as distinct records; re-reviews are real
/// recommendation events. Throws IoError on unreadable streams and
/// FormatError when more than max_rejected_fraction of lines are rejected.
EdgeBuffer ingest(std::istream& in, const IngestOptions& opts = {});

}  // namespace orfel
