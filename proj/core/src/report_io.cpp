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

#include "orfel/report_io.hpp"

#include <fstream>

namespace orfel {

using nlohmann::json;

namespace {

json io_to_json(const IoCounters& io) {
    return json{{"seeks", io.seeks}, {"blockReads", io.block_reads}, {"bytesRead", io.bytes_read}};
}

IoCounters io_from_json(const json& j) {
    IoCounters io;
    io.seeks = j.value("seeks", 0ull);
    io.block_reads = j.value("blockReads", 0ull);
    io.bytes_read = j.value("bytesRead", 0ull);
    return io;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError("bad JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_json_file(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace

json report_to_json(const DetectionReport& report) {
    const RunMetadata& m = report.meta;
    json params{{"n", m.params.min_users},
                {"m", m.params.min_products},
                {"rho", m.params.rho},
                {"deltaT", m.params.delta_t},
                {"kappa", m.params.kappa},
                {"mode", mode_name(m.params.mode)},
                {"nSeeds", m.params.n_seeds},
                {"rngSeed", m.params.rng_seed},
                {"initialUsersPerSeed", m.params.initial_users_per_seed}};
    json io = io_to_json(m.io_total);
    io["perIteration"] = json::array();
    for (const auto& it : m.io_per_iteration) io["perIteration"].push_back(io_to_json(it));
    json meta{{"params", params},
              {"threads", m.threads},
              {"maxIterations", m.max_iterations},
              {"datasetId", m.dataset_id},
              {"graph",
               {{"numUsers", m.num_users},
                {"numProducts", m.num_products},
                {"numEdges", m.num_edges}}},
              {"iterations", m.iterations},
              {"converged", m.converged},
              {"seedsCreated", m.seeds_created},
              {"seedsDead", m.seeds_dead},
              {"objectivePerIteration", m.objective_per_iteration},
              {"io", io}};
    json locksteps = json::array();
    for (const auto& l : report.locksteps) {
        json centers = json::object();
        for (const auto& [p, t] : l.centers) centers[p] = t;
        locksteps.push_back(json{{"users", l.users},
                                 {"products", l.products},
                                 {"centers", centers},
                                 {"mode", mode_name(l.mode)},
                                 {"score", l.score},
                                 {"iterationConverged", l.iteration_converged}});
    }
    return json{{"meta", meta}, {"locksteps", locksteps}};
}

DetectionReport report_from_json(const json& j) {
    DetectionReport r;
    const json& meta = j.at("meta");
    const json& p = meta.at("params");
    r.meta.params.min_users = p.value("n", 1u);
    r.meta.params.min_products = p.value("m", 1u);
    r.meta.params.rho = p.value("rho", 0.8);
    r.meta.params.delta_t = p.value("deltaT", 1ull);
    r.meta.params.kappa = static_cast<uint8_t>(p.value("kappa", 4u));
    r.meta.params.mode = parse_mode(p.value("mode", "promotion"));
    r.meta.params.n_seeds = p.value("nSeeds", 1u);
    r.meta.params.rng_seed = p.value("rngSeed", 0ull);
    r.meta.params.initial_users_per_seed = p.value("initialUsersPerSeed", 3u);
    r.meta.threads = meta.value("threads", 1u);
    r.meta.max_iterations = meta.value("maxIterations", 100u);
    r.meta.dataset_id = meta.value("datasetId", "");
    if (meta.contains("graph")) {
        r.meta.num_users = meta["graph"].value("numUsers", 0ull);
        r.meta.num_products = meta["graph"].value("numProducts", 0ull);
        r.meta.num_edges = meta["graph"].value("numEdges", 0ull);
    }
    r.meta.iterations = meta.value("iterations", 0u);
    r.meta.converged = meta.value("converged", false);
    r.meta.seeds_created = meta.value("seedsCreated", 0u);
    r.meta.seeds_dead = meta.value("seedsDead", 0u);
    if (meta.contains("objectivePerIteration"))
        r.meta.objective_per_iteration =
            meta["objectivePerIteration"].get<std::vector<uint64_t>>();
    if (meta.contains("io")) {
        r.meta.io_total = io_from_json(meta["io"]);
        if (meta["io"].contains("perIteration"))
            for (const auto& it : meta["io"]["perIteration"])
                r.meta.io_per_iteration.push_back(io_from_json(it));
    }
    for (const auto& l : j.value("locksteps", json::array())) {
        ReportedLockstep rl;
        rl.users = l.at("users").get<std::vector<std::string>>();
        rl.products = l.at("products").get<std::vector<std::string>>();
        if (l.contains("centers"))
            for (const auto& [k, v] : l.at("centers").items()) rl.centers[k] = v.get<double>();
        rl.mode = parse_mode(l.value("mode", "promotion"));
        rl.score = l.value("score", 0ull);
        rl.iteration_converged = l.value("iterationConverged", 0u);
        r.locksteps.push_back(std::move(rl));
    }
    return r;
}

void write_report(const DetectionReport& report, const std::filesystem::path& path) {
    write_json_file(report_to_json(report), path);
}

DetectionReport read_report(const std::filesystem::path& path) {
    return report_from_json(read_json_file(path));
}

json ground_truth_to_json(const NamedGroundTruth& truth, const AttackSpec* spec,
                          uint64_t rng_seed) {
    json attacks = json::array();
    for (const auto& a : truth.attacks) {
        json centers = json::object();
        for (const auto& [p, t] : a.centers) centers[p] = t;
        attacks.push_back(json{{"users", a.users},
                               {"products", a.products},
                               {"centers", centers},
                               {"mode", mode_name(a.mode)}});
    }
    json meta{{"attacks", truth.attacks.size()}, {"rngSeed", rng_seed}};
    if (spec) {
        meta["spec"] = json{{"users", spec->n_users},     {"products", spec->n_products},
                            {"deltaT", spec->delta_t},    {"mode", mode_name(spec->mode)},
                            {"kappa", spec->kappa},       {"count", spec->count}};
    }
    return json{{"meta", meta}, {"attacks", attacks}};
}

NamedGroundTruth ground_truth_from_json(const json& j) {
    NamedGroundTruth truth;
    for (const auto& a : j.value("attacks", json::array())) {
        NamedAttack n;
        n.users = a.at("users").get<std::vector<std::string>>();
        n.products = a.at("products").get<std::vector<std::string>>();
        if (a.contains("centers"))
            for (const auto& [k, v] : a.at("centers").items()) n.centers[k] = v.get<uint64_t>();
        n.mode = parse_mode(a.value("mode", "promotion"));
        truth.attacks.push_back(std::move(n));
    }
    return truth;
}

void write_ground_truth(const NamedGroundTruth& truth, const AttackSpec* spec, uint64_t rng_seed,
                        const std::filesystem::path& path) {
    write_json_file(ground_truth_to_json(truth, spec, rng_seed), path);
}

NamedGroundTruth read_ground_truth(const std::filesystem::path& path) {
    return ground_truth_from_json(read_json_file(path));
}

AttackSpec attack_spec_from_json(const json& j) {
    AttackSpec spec;
    spec.n_users = j.value("users", 0u);
    spec.n_products = j.value("products", 0u);
    spec.delta_t = j.value("deltaT", 86400ull);
    spec.mode = parse_mode(j.value("mode", "promotion"));
    spec.kappa = static_cast<uint8_t>(j.value("kappa", spec.mode == Mode::Defamation ? 2u : 4u));
    spec.count = j.value("count", 1u);
    return spec;
}

json recall_to_json(const RecallResult& r) {
    json per_attack = json::array();
    for (size_t i = 0; i < r.per_attack.size(); ++i) {
        const auto& a = r.per_attack[i];
        per_attack.push_back(json{{"attack", i},
                                  {"caught", a.caught},
                                  {"lockstep", a.lockstep},
                                  {"userOverlap", a.user_overlap},
                                  {"productOverlap", a.product_overlap}});
    }
    return json{{"caught", r.caught},     {"total", r.total},
                {"recall", r.recall},     {"coverage", r.coverage},
                {"perAttack", per_attack}};
}

json manifest_to_json(const GraphManifest& m) {
    json shards = json::array();
    for (const auto& s : m.shards)
        shards.push_back(json{{"firstProduct", s.first_product},
                              {"lastProduct", s.last_product},
                              {"byteOffset", s.byte_offset},
                              {"records", s.records}});
    return json{{"formatVersion", m.format_version},
                {"numUsers", m.num_users},
                {"numProducts", m.num_products},
                {"numEdges", m.num_edges},
                {"datasetId", m.dataset_id},
                {"inputHash", m.input_hash},
                {"memoryBudget", m.memory_budget},
                {"blockSize", m.block_size},
                {"productFileBytes", m.product_file_bytes},
                {"userFileBytes", m.user_file_bytes},
                {"duplicateEdges", m.duplicate_edges},
                {"rejectedLines", m.rejected_lines},
                {"shards", shards}};
}

GraphManifest manifest_from_json(const json& j) {
    GraphManifest m;
    m.format_version = static_cast<uint16_t>(j.value("formatVersion", 1u));
    m.num_users = j.value("numUsers", 0ull);
    m.num_products = j.value("numProducts", 0ull);
    m.num_edges = j.value("numEdges", 0ull);
    m.dataset_id = j.value("datasetId", "");
    m.input_hash = j.value("inputHash", "");
    m.memory_budget = j.value("memoryBudget", 0ull);
    m.block_size = j.value("blockSize", 0ull);
    m.product_file_bytes = j.value("productFileBytes", 0ull);
    m.user_file_bytes = j.value("userFileBytes", 0ull);
    m.duplicate_edges = j.value("duplicateEdges", 0ull);
    m.rejected_lines = j.value("rejectedLines", 0ull);
    for (const auto& s : j.value("shards", json::array())) {
        ShardInfo info;
        info.first_product = s.value("firstProduct", 0u);
        info.last_product = s.value("lastProduct", 0u);
        info.byte_offset = s.value("byteOffset", 0ull);
        info.records = s.value("records", 0ull);
        m.shards.push_back(info);
    }
    return m;
}

}  // namespace orfel
