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

#include "orfel/graph_store.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "orfel/report_io.hpp"

namespace orfel {

namespace fs = std::filesystem;

namespace {

constexpr const char* kProductFile = "edges.products.orfl";
constexpr const char* kUserFile = "edges.users.orfl";
constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kUserIdsFile = "users.ids";
constexpr const char* kProductIdsFile = "products.ids";
constexpr size_t kHeaderBytes = 4 + 2 + 8;  // magic, version, record count

void put_u16(unsigned char* p, uint16_t v) {
    p[0] = static_cast<unsigned char>(v);
    p[1] = static_cast<unsigned char>(v >> 8);
}
void put_u32(unsigned char* p, uint32_t v) {
    for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}
void put_u64(unsigned char* p, uint64_t v) {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}
uint16_t get_u16(const unsigned char* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}
uint32_t get_u32(const unsigned char* p) {
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}
uint64_t get_u64(const unsigned char* p) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

// Writes one ordering of the edge list (header + 17-byte records) and
// returns the fnv1a64 of the record bytes.
uint64_t write_edge_file(const fs::path& path, const std::vector<Recommendation>& edges) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("preprocess: cannot open " + path.string() + " for writing");

    unsigned char header[kHeaderBytes];
    std::memcpy(header, kShardMagic, 4);
    put_u16(header + 4, kFormatVersion);
    put_u64(header + 6, edges.size());
    out.write(reinterpret_cast<const char*>(header), kHeaderBytes);

    Fnv1a64 hash;
    std::vector<unsigned char> buf;
    buf.reserve(kRecordBytes * 4096);
    unsigned char rec[kRecordBytes];
    for (const auto& e : edges) {
        detail::encode_record(e, rec);
        buf.insert(buf.end(), rec, rec + kRecordBytes);
        if (buf.size() >= kRecordBytes * 4096) {
            out.write(reinterpret_cast<const char*>(buf.data()),
                      static_cast<std::streamsize>(buf.size()));
            hash.update(buf.data(), buf.size());
            buf.clear();
        }
    }
    if (!buf.empty()) {
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size()));
        hash.update(buf.data(), buf.size());
    }
    out.flush();
    if (!out) throw IoError("preprocess: write failure on " + path.string());
    return hash.digest();
}

void write_id_file(const fs::path& path, const std::vector<std::string>& ids) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("preprocess: cannot open " + path.string());
    for (const auto& id : ids) out << id << '\n';
    out.flush();
    if (!out) throw IoError("preprocess: write failure on " + path.string());
}

std::vector<std::string> read_id_file(const fs::path& path, uint64_t expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open id dictionary " + path.string());
    std::vector<std::string> ids;
    ids.reserve(expected);
    std::string line;
    while (std::getline(in, line)) ids.push_back(line);
    if (ids.size() != expected)
        throw FormatError("id dictionary " + path.string() + " has " +
                          std::to_string(ids.size()) + " entries, expected " +
                          std::to_string(expected));
    return ids;
}

}  // namespace

namespace detail {

void encode_record(const Recommendation& r, unsigned char* out) {
    put_u32(out, r.user);
    put_u32(out + 4, r.product);
    put_u64(out + 8, r.timestamp);
    out[16] = r.weight;
}

Recommendation decode_record(const unsigned char* in) {
    Recommendation r;
    r.user = get_u32(in);
    r.product = get_u32(in + 4);
    r.timestamp = get_u64(in + 8);
    r.weight = in[16];
    return r;
}

uint64_t shard_count(uint64_t num_edges, uint64_t memory_budget) {
    uint64_t dataset = num_edges * kRecordBytes;
    uint64_t p = (dataset + memory_budget - 1) / memory_budget;
    if (p == 0) p = 1;
    // A shard never exceeds the budget; when the budget is not a multiple of
    // the record size the even split can spill by one record, in which case
    // one more shard is used.
    uint64_t per_shard = (num_edges + p - 1) / p;
    uint64_t max_records = memory_budget / kRecordBytes;
    if (max_records == 0) throw ConfigError("memory budget below one record");
    if (per_shard > max_records) p = (num_edges + max_records - 1) / max_records;
    return p;
}

}  // namespace detail

uint64_t resolve_block_size(uint64_t explicit_value) {
    if (explicit_value != 0) {
        if (explicit_value < kMinBlockSize)
            throw ConfigError("block size must be at least " + std::to_string(kMinBlockSize));
        return explicit_value;
    }
    if (const char* env = std::getenv("ORFEL_BLOCK_SIZE")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v < kMinBlockSize)
            throw ConfigError("invalid ORFEL_BLOCK_SIZE value");
        return v;
    }
    return kDefaultBlockSize;
}

GraphManifest preprocess(const EdgeBuffer& buf, const fs::path& out_dir,
                         uint64_t memory_budget, uint64_t block_size,
                         const std::string& input_hash) {
    block_size = resolve_block_size(block_size);
    if (buf.edges.empty()) throw ConfigError("preprocess: edge buffer is empty");
    if (memory_budget < 2 * block_size)
        throw ConfigError("preprocess: memory budget must be at least two blocks (" +
                          std::to_string(2 * block_size) + " bytes)");

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("preprocess: cannot create " + out_dir.string());

    GraphManifest m;
    m.input_hash = input_hash;
    m.num_users = buf.num_users();
    m.num_products = buf.num_products();
    m.num_edges = buf.edges.size();
    m.memory_budget = memory_budget;
    m.block_size = block_size;
    m.duplicate_edges = buf.duplicate_edges;
    m.rejected_lines = buf.rejected_lines;

    // Product-major ordering; the full key pins the byte layout so that a
    // rerun on identical input is byte-identical.
    std::vector<Recommendation> sorted = buf.edges;
    std::sort(sorted.begin(), sorted.end(), [](const Recommendation& a, const Recommendation& b) {
        return std::tie(a.product, a.user, a.timestamp, a.weight) <
               std::tie(b.product, b.user, b.timestamp, b.weight);
    });

    uint64_t p = detail::shard_count(m.num_edges, memory_budget);
    uint64_t per_shard = (m.num_edges + p - 1) / p;
    for (uint64_t s = 0; s < p; ++s) {
        uint64_t first = s * per_shard;
        if (first >= m.num_edges) break;
        uint64_t count = std::min(per_shard, m.num_edges - first);
        ShardInfo info;
        info.first_product = sorted[first].product;
        info.last_product = sorted[first + count - 1].product;
        info.byte_offset = kHeaderBytes + first * kRecordBytes;
        info.records = count;
        m.shards.push_back(info);
    }

    Fnv1a64 content;
    uint64_t product_hash = write_edge_file(out_dir / kProductFile, sorted);
    content.update(&product_hash, sizeof(product_hash));
    m.dataset_id = content.hex();

    std::sort(sorted.begin(), sorted.end(), [](const Recommendation& a, const Recommendation& b) {
        return std::tie(a.user, a.product, a.timestamp, a.weight) <
               std::tie(b.user, b.product, b.timestamp, b.weight);
    });
    write_edge_file(out_dir / kUserFile, sorted);

    m.product_file_bytes = fs::file_size(out_dir / kProductFile);
    m.user_file_bytes = fs::file_size(out_dir / kUserFile);

    write_id_file(out_dir / kUserIdsFile, buf.user_ids);
    write_id_file(out_dir / kProductIdsFile, buf.product_ids);

    std::ofstream mf(out_dir / kManifestFile, std::ios::binary | std::ios::trunc);
    if (!mf) throw IoError("preprocess: cannot write manifest");
    mf << manifest_to_json(m).dump(2) << '\n';
    mf.flush();
    if (!mf) throw IoError("preprocess: manifest write failure");
    return m;
}

BipartiteGraph BipartiteGraph::open(const fs::path& dir) {
    BipartiteGraph g;
    g.dir_ = dir;
    std::ifstream mf(dir / kManifestFile, std::ios::binary);
    if (!mf) throw IoError("open: no manifest in " + dir.string());
    nlohmann::json j;
    try {
        mf >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("open: bad manifest: " + std::string(e.what()));
    }
    g.manifest_ = manifest_from_json(j);
    if (g.manifest_.format_version != kFormatVersion)
        throw FormatError("open: unsupported format version");
    g.block_size_ = resolve_block_size(g.manifest_.block_size);
    return g;
}

void BipartiteGraph::scan_file(const fs::path& file, bool product_major,
                               const ScanVisitor& visitor) const {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("scan: cannot open " + file.string());
    io_.seeks += 1;  // position at offset 0

    std::vector<unsigned char> block(block_size_);
    size_t carry = 0;  // bytes of a split record carried between blocks
    unsigned char carry_buf[kRecordBytes];

    bool header_done = false;
    uint64_t expected = 0, seen = 0;

    bool have_vertex = false;
    VertexId current = 0;
    std::vector<Recommendation> adjacency;

    auto flush = [&] {
        if (have_vertex && !adjacency.empty()) {
            visitor(current, std::span<const Recommendation>(adjacency));
            adjacency.clear();
        }
    };

    std::vector<unsigned char> header_carry;
    while (in) {
        in.read(reinterpret_cast<char*>(block.data()), static_cast<std::streamsize>(block.size()));
        auto got = static_cast<size_t>(in.gcount());
        if (got == 0) break;
        io_.block_reads += 1;
        io_.bytes_read += got;

        const unsigned char* p = block.data();
        size_t remaining = got;

        if (!header_done) {
            // Header may straddle the first blocks when the block size is tiny.
            size_t need = kHeaderBytes - header_carry.size();
            size_t take = std::min(need, remaining);
            header_carry.insert(header_carry.end(), p, p + take);
            p += take;
            remaining -= take;
            if (header_carry.size() < kHeaderBytes) continue;
            if (std::memcmp(header_carry.data(), kShardMagic, 4) != 0)
                throw FormatError("scan: bad magic in " + file.string());
            if (get_u16(header_carry.data() + 4) != kFormatVersion)
                throw FormatError("scan: bad version in " + file.string());
            expected = get_u64(header_carry.data() + 6);
            header_done = true;
        }

        while (carry + remaining >= kRecordBytes) {
            Recommendation r;
            if (carry > 0) {
                size_t take = kRecordBytes - carry;
                std::memcpy(carry_buf + carry, p, take);
                r = detail::decode_record(carry_buf);
                p += take;
                remaining -= take;
                carry = 0;
            } else {
                r = detail::decode_record(p);
                p += kRecordBytes;
                remaining -= kRecordBytes;
            }
            ++seen;
            VertexId v = product_major ? r.product : r.user;
            if (!have_vertex || v != current) {
                flush();
                current = v;
                have_vertex = true;
            }
            adjacency.push_back(r);
        }
        if (remaining > 0) {
            std::memcpy(carry_buf + carry, p, remaining);
            carry += remaining;
        }
    }
    if (in.bad()) throw IoError("scan: read failure on " + file.string());
    if (!header_done && manifest_.num_edges != 0)
        throw FormatError("scan: truncated file " + file.string());
    if (carry != 0 || (header_done && seen != expected))
        throw FormatError("scan: record count mismatch in " + file.string());
    flush();
}

void BipartiteGraph::scan_products(const ScanVisitor& visitor) const {
    scan_file(dir_ / kProductFile, true, visitor);
}

void BipartiteGraph::scan_users(const ScanVisitor& visitor) const {
    scan_file(dir_ / kUserFile, false, visitor);
}

const std::vector<std::string>& BipartiteGraph::user_ids() const {
    if (!user_ids_) user_ids_ = read_id_file(dir_ / kUserIdsFile, manifest_.num_users);
    return *user_ids_;
}

const std::vector<std::string>& BipartiteGraph::product_ids() const {
    if (!product_ids_) product_ids_ = read_id_file(dir_ / kProductIdsFile, manifest_.num_products);
    return *product_ids_;
}

GraphStats graph_stats(const BipartiteGraph& graph) {
    GraphStats s;
    s.num_users = graph.num_users();
    s.num_products = graph.num_products();
    s.num_edges = graph.num_edges();

    auto summarize = [](uint64_t total_vertices, std::vector<uint64_t>& degrees,
                        uint64_t edges) {
        DegreeSummary d;
        if (total_vertices == 0) return d;
        uint64_t covered = degrees.size();
        d.min = covered < total_vertices
                    ? 0
                    : *std::min_element(degrees.begin(), degrees.end());
        d.max = degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
        d.mean = static_cast<double>(edges) / static_cast<double>(total_vertices);
        return d;
    };

    std::vector<uint64_t> deg;
    graph.scan_products([&](VertexId, std::span<const Recommendation> adj) {
        deg.push_back(adj.size());
    });
    s.product_degree = summarize(s.num_products, deg, s.num_edges);
    deg.clear();
    graph.scan_users([&](VertexId, std::span<const Recommendation> adj) {
        deg.push_back(adj.size());
    });
    s.user_degree = summarize(s.num_users, deg, s.num_edges);
    return s;
}

}  // namespace orfel
