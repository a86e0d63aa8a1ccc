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

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "orfel/ingest.hpp"
#include "orfel/types.hpp"

namespace orfel {

/// One contiguous slice of the product-major file. Shards are sized so that
/// a whole shard fits in the memory budget; a product's adjacency may span
/// two shards when it alone is larger than a shard.
struct ShardInfo {
    VertexId first_product = 0;
    VertexId last_product = 0;
    uint64_t byte_offset = 0;   // into the product-major file, first record byte
    uint64_t records = 0;
};

struct GraphManifest {
    uint16_t format_version = kFormatVersion;
    uint64_t num_users = 0;
    uint64_t num_products = 0;
    uint64_t num_edges = 0;
    std::string dataset_id;    // fnv1a64 over the product-major record bytes
    std::string input_hash;    // fnv1a64 over the raw input text
    uint64_t memory_budget = 0;
    uint64_t block_size = 0;
    uint64_t product_file_bytes = 0;
    uint64_t user_file_bytes = 0;
    uint64_t duplicate_edges = 0;
    uint64_t rejected_lines = 0;
    std::vector<ShardInfo> shards;

    uint64_t dataset_bytes() const { return product_file_bytes + user_file_bytes; }
};

/// Cumulative storage-layer counters, used to assert the
/// "P^2 seeks + 2B block reads per iteration" cost model.
struct IoCounters {
    uint64_t seeks = 0;
    uint64_t block_reads = 0;
    uint64_t bytes_read = 0;

    IoCounters operator-(const IoCounters& o) const {
        return {seeks - o.seeks, block_reads - o.block_reads, bytes_read - o.bytes_read};
    }
};

/// Visitor receives each vertex exactly once together with its whole
/// adjacency list, in ascending vertex order.
using ScanVisitor = std::function<void(VertexId, std::span<const Recommendation>)>;

/// Resolves the effective block size: explicit value if nonzero, else the
/// ORFEL_BLOCK_SIZE environment variable, else 1 MiB.
uint64_t resolve_block_size(uint64_t explicit_value = 0);

/// Converts an in-memory edge buffer into the on-disk sharded layout:
/// a product-major file, a user-major mirror, id dictionaries and a JSON
/// manifest. Re-running on identical input produces byte-identical files.
/// input_hash, when supplied, is recorded in the manifest so callers can
/// short-circuit reruns on unchanged input.
GraphManifest preprocess(const EdgeBuffer& edges,
                         const std::filesystem::path& out_dir,
                         uint64_t memory_budget,
                         uint64_t block_size = 0,
                         const std::string& input_hash = "");

/// Immutable, preprocessed bipartite graph driving sequential
/// vertex-centric scans from disk.
class BipartiteGraph {
public:
    static BipartiteGraph open(const std::filesystem::path& dir);

    const GraphManifest& manifest() const { return manifest_; }
    const std::filesystem::path& dir() const { return dir_; }
    uint64_t num_users() const { return manifest_.num_users; }
    uint64_t num_products() const { return manifest_.num_products; }
    uint64_t num_edges() const { return manifest_.num_edges; }

    /// Visits every product with at least one edge, ascending product order.
    void scan_products(const ScanVisitor& visitor) const;
    /// Visits every user with at least one edge, ascending user order.
    void scan_users(const ScanVisitor& visitor) const;

    const IoCounters& io() const { return io_; }
    void reset_io() const { io_ = {}; }

    /// Original-id dictionaries, loaded lazily from the sidecar files.
    const std::vector<std::string>& user_ids() const;
    const std::vector<std::string>& product_ids() const;

private:
    void scan_file(const std::filesystem::path& file, bool product_major,
                   const ScanVisitor& visitor) const;

    std::filesystem::path dir_;
    GraphManifest manifest_;
    uint64_t block_size_ = kDefaultBlockSize;
    mutable IoCounters io_;
    mutable std::optional<std::vector<std::string>> user_ids_;
    mutable std::optional<std::vector<std::string>> product_ids_;
};

struct DegreeSummary {
    uint64_t min = 0;
    uint64_t max = 0;
    double mean = 0.0;
};

struct GraphStats {
    uint64_t num_users = 0;
    uint64_t num_products = 0;
    uint64_t num_edges = 0;
    DegreeSummary user_degree;
    DegreeSummary product_degree;
};

GraphStats graph_stats(const BipartiteGraph& graph);

namespace detail {
// Shard count and record layout; exposed for the layout unit tests.
uint64_t shard_count(uint64_t num_edges, uint64_t memory_budget);
void encode_record(const Recommendation& r, unsigned char* out);
Recommendation decode_record(const unsigned char* in);
}  // namespace detail

}  // namespace orfel
