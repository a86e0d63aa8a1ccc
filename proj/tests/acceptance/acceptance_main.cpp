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

// Acceptance suite. Each criterion prints exactly one PASS/FAIL line; the
// process exits nonzero if any requested criterion fails.
//
//   orfel_acceptance            run all criteria
//   orfel_acceptance 3 7       run criteria 3 and 7

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "orfel/attack_gen.hpp"
#include "orfel/definition_oracle.hpp"
#include "orfel/engine.hpp"
#include "orfel/graph_store.hpp"
#include "orfel/report_io.hpp"
#include "support/test_util.hpp"

using namespace orfel;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path work_dir(int criterion) {
    fs::path dir = fs::path("acceptance-work") / ("c" + std::to_string(criterion));
    fs::create_directories(dir);
    return dir;
}

EdgeBuffer buffer_from(const SyntheticGraph& g) {
    EdgeBuffer buf;
    buf.edges = g.edges;
    buf.user_ids.reserve(g.num_users);
    for (uint32_t u = 0; u < g.num_users; ++u) buf.user_ids.push_back(std::to_string(u));
    buf.product_ids.reserve(g.num_products);
    for (uint32_t p = 0; p < g.num_products; ++p) buf.product_ids.push_back(std::to_string(p));
    buf.total_lines = buf.edges.size();
    return buf;
}

// Preprocesses into dir unless a matching store is already there.
BipartiteGraph prepare(const SyntheticGraph& g, const fs::path& dir, uint64_t budget,
                       uint64_t block = 0) {
    if (fs::exists(dir / "manifest.json")) {
        BipartiteGraph existing = BipartiteGraph::open(dir);
        if (existing.num_edges() == g.edges.size() &&
            existing.manifest().memory_budget == budget)
            return existing;
    }
    preprocess(buffer_from(g), dir, budget, block);
    return BipartiteGraph::open(dir);
}

DetectionParams standard_params(uint32_t n, uint32_t m, Mode mode, uint64_t delta_t,
                                uint64_t rng_seed, uint32_t seeds) {
    DetectionParams p;
    p.min_users = n;
    p.min_products = m;
    p.rho = 0.8;
    p.delta_t = delta_t;
    p.mode = mode;
    p.kappa = mode == Mode::Defamation ? 2 : 4;
    p.n_seeds = seeds;
    p.rng_seed = rng_seed;
    return p;
}

// Detection over both weight modes; recall is evaluated on the merged
// reports since a single run's lambda only sees one side of kappa.
RecallResult detect_and_score(const BipartiteGraph& graph, const NamedGroundTruth& truth,
                              uint32_t n, uint32_t m, uint64_t delta_t, uint64_t rng_seed,
                              uint32_t seeds, std::vector<DetectionReport>* reports_out = nullptr) {
    std::vector<ReportedLockstep> merged;
    for (Mode mode : {Mode::Promotion, Mode::Defamation}) {
        DetectionParams params = standard_params(n, m, mode, delta_t, rng_seed, seeds);
        DetectionReport report = run_detection(graph, params);
        for (auto& l : report.locksteps) merged.push_back(l);
        if (reports_out) reports_out->push_back(std::move(report));
    }
    return evaluate_recall(merged, truth, 0.8);
}

struct TinyInstance {
    SyntheticGraph graph;
    DetectionParams params;
};

TinyInstance tiny_instance(uint64_t seed, bool small) {
    std::mt19937_64 rng(seed);
    TinyInstance inst;
    uint32_t nu = small ? 2 + rng() % 5 : 7 + rng() % 6;   // <=6 or 7..12 users
    uint32_t np = small ? 2 + rng() % 3 : 5 + rng() % 4;   // <=4 or 5..8 products
    uint64_t dt = 100 + rng() % 900;
    Mode mode = rng() % 2 ? Mode::Promotion : Mode::Defamation;

    inst.graph.num_users = nu;
    inst.graph.num_products = np;
    inst.graph.ts_lo = 0;
    inst.graph.ts_hi = 6 * dt;
    uint32_t ne = rng() % (2 * nu * np + 1);
    for (uint32_t e = 0; e < ne; ++e)
        inst.graph.edges.push_back({static_cast<VertexId>(rng() % nu),
                                    static_cast<VertexId>(rng() % np), rng() % (6 * dt),
                                    static_cast<uint8_t>(1 + rng() % 5)});
    if (rng() % 2) {
        // Plant a coherent block over a random subset.
        uint32_t bu = 2 + rng() % std::max(1u, nu - 1);
        uint32_t bp = 2 + rng() % std::max(1u, np - 1);
        bu = std::min(bu, nu);
        bp = std::min(bp, np);
        std::vector<VertexId> us, ps;
        for (VertexId u = 0; u < bu; ++u) us.push_back(u);
        for (VertexId p = 0; p < bp; ++p) ps.push_back(p);
        orfel::test::plant_block(inst.graph.edges, us, ps, dt, mode,
                                 mode == Mode::Defamation ? 2 : 4, dt, 5 * dt, rng);
    }

    inst.params.min_users = 2 + rng() % 2;
    inst.params.min_products = 2;
    inst.params.rho = 0.5 + 0.125 * static_cast<double>(rng() % 5);
    inst.params.delta_t = dt;
    inst.params.mode = mode;
    inst.params.kappa = mode == Mode::Defamation ? 2 : 4;
    inst.params.n_seeds = np;  // every eligible product gets a seed
    inst.params.rng_seed = seed;
    inst.params.initial_users_per_seed = 2;
    return inst;
}

// ---------------------------------------------------------------------------

bool criterion_1() {
    auto t0 = Clock::now();
    int runs = 0, clean = 0;
    for (uint64_t edges : {1000, 2500, 5000, 10000}) {
        SyntheticGraph g = generate_bipartite(500, 2000, edges, 0, 10'000'000, 100 + edges);
        for (auto [n, m] : {std::pair<uint32_t, uint32_t>{10, 5}, {25, 10}}) {
            DetectionParams params = standard_params(
                n, m, Mode::Promotion, 86400, 11,
                static_cast<uint32_t>(suggest_seeds(edges)));
            DetectionReport report =
                run_detection_in_memory(g.edges, g.num_users, g.num_products, params);
            ++runs;
            if (report.locksteps.empty() && report.meta.converged) ++clean;
        }
    }
    double sec = seconds_since(t0);
    bool pass = runs == 8 && clean == 8 && sec < 60.0;
    std::printf("%s criterion 1: no-false-positive control: %d/%d structure-free runs "
                "reported zero locksteps (%.1f s, limit 60 s)\n",
                pass ? "PASS" : "FAIL", clean, runs, sec);
    return pass;
}

struct InjectedGraph {
    SyntheticGraph graph;
    NamedGroundTruth truth;
};

InjectedGraph injected_1m(uint32_t attack_users, uint32_t attack_products, uint64_t seed) {
    InjectedGraph out;
    out.graph = generate_bipartite(20'000, 80'000, 1'000'000, 0, 10'000'000, seed);
    GroundTruth truth;
    uint64_t next_seed = seed + 1;
    for (Mode mode : {Mode::Defamation, Mode::Promotion}) {
        AttackSpec spec;
        spec.n_users = attack_users;
        spec.n_products = attack_products;
        spec.delta_t = 86400;
        spec.mode = mode;
        spec.kappa = mode == Mode::Defamation ? 2 : 4;
        spec.count = 10;
        GroundTruth part = inject_lockstep(out.graph, spec, next_seed++);
        for (auto& a : part.attacks) truth.attacks.push_back(std::move(a));
    }
    out.truth = name_ground_truth(truth, nullptr, nullptr);
    return out;
}

bool criterion_2() {
    auto t0 = Clock::now();
    InjectedGraph data = injected_1m(500, 250, 200);
    BipartiteGraph graph = prepare(data.graph, work_dir(2) / "g1m-a500x250", 256ull << 20);
    auto seeds = static_cast<uint32_t>(suggest_seeds(graph.num_edges()));

    std::vector<double> recalls;
    for (uint64_t run = 1; run <= 4; ++run) {
        RecallResult r = detect_and_score(graph, data.truth, 50, 25, 86400, 300 + run, seeds);
        recalls.push_back(r.recall);
    }
    double mean = 0, lo = 1, hi = 0;
    for (double r : recalls) {
        mean += r;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    mean /= static_cast<double>(recalls.size());
    double spread = hi - lo;
    double sec = seconds_since(t0);
    bool pass = mean >= 0.95 && spread <= 0.05;
    std::printf("%s criterion 2: desk-scale recall: mean %.3f over 4 runs "
                "(spread %.3f, seeds %u, %.0f s, target < 900 s)\n",
                pass ? "PASS" : "FAIL", mean, spread, seeds, sec);
    return pass;
}

bool criterion_3() {
    struct SizeResult {
        uint32_t users, products;
        double recall;
    };
    std::vector<SizeResult> results;
    for (auto [au, ap] : {std::pair<uint32_t, uint32_t>{50, 25},
                          {100, 50},
                          {250, 125},
                          {500, 250}}) {
        InjectedGraph data = injected_1m(au, ap, 500 + au);
        fs::path dir = work_dir(3) / ("g1m-a" + std::to_string(au) + "x" + std::to_string(ap));
        BipartiteGraph graph = prepare(data.graph, dir, 256ull << 20);
        auto seeds = static_cast<uint32_t>(suggest_seeds(graph.num_edges()));
        RecallResult r = detect_and_score(graph, data.truth, 50, 25, 86400, 700 + au, seeds);
        results.push_back({au, ap, r.recall});
    }
    bool monotone = true;
    for (size_t i = 1; i < results.size(); ++i)
        if (results[i].recall < results[i - 1].recall - 0.10) monotone = false;
    bool top = results.back().recall >= 0.90;
    bool pass = monotone && top;
    std::ostringstream detail;
    for (const auto& r : results)
        detail << " (" << r.users << "x" << r.products << ")=" << r.recall;
    std::printf("%s criterion 3: recall vs attack size is non-decreasing within 10 points "
                "and tops >= 0.90:%s\n",
                pass ? "PASS" : "FAIL", detail.str().c_str());
    return pass;
}

bool criterion_4() {
    int reported_checked = 0, crosschecked = 0, disagreements = 0, unsound = 0;
    for (int i = 0; i < 200; ++i) {
        bool small = i < 120;
        TinyInstance inst = tiny_instance(600 + i, small);
        DetectionReport report = run_detection_in_memory(
            inst.graph.edges, inst.graph.num_users, inst.graph.num_products, inst.params);
        for (const auto& l : report.locksteps) {
            std::vector<VertexId> users, products;
            for (const auto& s : l.users) users.push_back(static_cast<VertexId>(std::stoul(s)));
            for (const auto& s : l.products)
                products.push_back(static_cast<VertexId>(std::stoul(s)));
            ++reported_checked;
            if (!verify_definition(users, products, inst.graph.edges, inst.params)) ++unsound;
        }
        if (small) {
            std::vector<VertexId> users, products;
            for (VertexId u = 0; u < inst.graph.num_users; ++u) users.push_back(u);
            for (VertexId p = 0; p < inst.graph.num_products; ++p) products.push_back(p);
            bool a = verify_definition(users, products, inst.graph.edges, inst.params);
            bool b = orfel::test::brute_force_definition(users, products, inst.graph.edges,
                                                         inst.params);
            ++crosschecked;
            if (a != b) ++disagreements;
        }
    }
    bool pass = unsound == 0 && disagreements == 0 && reported_checked > 0;
    std::printf("%s criterion 4: oracle soundness: %d reported locksteps verified, "
                "%d brute-force cross-checks, %d disagreements, %d unsound\n",
                pass ? "PASS" : "FAIL", reported_checked, crosschecked, disagreements, unsound);
    return pass;
}

bool criterion_5() {
    uint64_t iterations = 0, monotone_steps = 0, violations = 0;
    int runs = 0, nonconverged = 0;
    auto absorb = [&](const DetectionReport& report) {
        ++runs;
        if (!report.meta.converged) ++nonconverged;
        iterations += report.meta.iterations;
        const auto& trace = report.meta.objective_per_iteration;
        for (size_t i = 1; i < trace.size(); ++i) {
            ++monotone_steps;
            if (trace[i] < trace[i - 1]) ++violations;
        }
    };

    // Structure-free fixtures.
    for (uint64_t edges : {1000, 2500, 5000, 10000}) {
        SyntheticGraph g = generate_bipartite(500, 2000, edges, 0, 10'000'000, 100 + edges);
        for (auto [n, m] : {std::pair<uint32_t, uint32_t>{10, 5}, {25, 10}}) {
            DetectionParams params =
                standard_params(n, m, Mode::Promotion, 86400, 11,
                                static_cast<uint32_t>(suggest_seeds(edges)));
            absorb(run_detection_in_memory(g.edges, g.num_users, g.num_products, params));
        }
    }
    // Randomized tiny fixtures.
    for (int i = 0; i < 200; ++i) {
        TinyInstance inst = tiny_instance(600 + i, i < 120);
        absorb(run_detection_in_memory(inst.graph.edges, inst.graph.num_users,
                                       inst.graph.num_products, inst.params));
    }
    // A mid-size injected fixture, both modes.
    SyntheticGraph g = generate_bipartite(5000, 20'000, 100'000, 0, 10'000'000, 900);
    for (Mode mode : {Mode::Defamation, Mode::Promotion}) {
        AttackSpec spec;
        spec.n_users = 100;
        spec.n_products = 50;
        spec.delta_t = 86400;
        spec.mode = mode;
        spec.kappa = mode == Mode::Defamation ? 2 : 4;
        spec.count = 2;
        inject_lockstep(g, spec, 901 + static_cast<int>(mode));
    }
    for (Mode mode : {Mode::Defamation, Mode::Promotion}) {
        DetectionParams params = standard_params(50, 25, mode, 86400, 902,
                                                 static_cast<uint32_t>(suggest_seeds(105'000)));
        absorb(run_detection_in_memory(g.edges, g.num_users, g.num_products, params));
    }

    bool pass = violations == 0 && nonconverged == 0 && monotone_steps > 0;
    std::printf("%s criterion 5: objective monotone in %llu/%llu iteration steps across %d runs; "
                "%d runs hit the iteration cap\n",
                pass ? "PASS" : "FAIL",
                static_cast<unsigned long long>(monotone_steps - violations),
                static_cast<unsigned long long>(monotone_steps), runs, nonconverged);
    return pass;
}

double timed_detect(const BipartiteGraph& graph, uint32_t seeds, uint64_t rng_seed,
                    int repeats, DetectionReport* out = nullptr) {
    double best = 0;
    for (int r = 0; r < repeats; ++r) {
        DetectionParams params = standard_params(50, 25, Mode::Promotion, 86400, rng_seed, seeds);
        DetectionReport rep = run_detection(graph, params);
        if (r == 0 || rep.meta.wall_clock_sec < best) best = rep.meta.wall_clock_sec;
        if (out) *out = std::move(rep);
    }
    return best;
}

bool criterion_6() {
    std::vector<double> xs, ys;
    std::ostringstream detail;
    for (uint64_t edges : {1'000'000, 2'000'000, 4'000'000, 8'000'000}) {
        SyntheticGraph g = generate_bipartite(static_cast<uint32_t>(edges / 50),
                                              static_cast<uint32_t>(edges / 12), edges, 0,
                                              10'000'000, 1000 + edges / 1'000'000);
        fs::path dir = work_dir(6) / ("g" + std::to_string(edges));
        BipartiteGraph graph = prepare(g, dir, 512ull << 20);
        double sec = timed_detect(graph, 100, 77, 2);
        xs.push_back(static_cast<double>(edges));
        ys.push_back(sec);
        detail << " " << edges / 1'000'000 << "M=" << sec << "s";
    }
    // Least-squares affine fit and its R^2.
    size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    for (size_t i = 0; i < n; ++i) {
        double fit = slope * xs[i] + intercept;
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - sy / n) * (ys[i] - sy / n);
    }
    double r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    bool pass = r2 >= 0.95;
    std::printf("%s criterion 6: edge scaling linear fit R^2 %.4f (>= 0.95):%s\n",
                pass ? "PASS" : "FAIL", r2, detail.str().c_str());
    return pass;
}

bool criterion_7() {
    SyntheticGraph g = generate_bipartite(20'000, 83'000, 1'000'000, 0, 10'000'000, 1101);
    BipartiteGraph graph = prepare(g, work_dir(7) / "g1m", 256ull << 20);
    double t100 = timed_detect(graph, 100, 55, 2);
    double t5000 = timed_detect(graph, 5000, 55, 2);
    double ratio = t100 > 0 ? t5000 / t100 : 0;
    bool pass = t100 > 0 && ratio <= 50.0;
    std::printf("%s criterion 7: seed scaling: %.3f s at 100 seeds, %.3f s at 5000 seeds, "
                "ratio %.1f (<= 50)\n",
                pass ? "PASS" : "FAIL", t100, t5000, ratio);
    return pass;
}

bool criterion_8() {
    SyntheticGraph g = generate_bipartite(4000, 16'000, 200'000, 0, 10'000'000, 1201);
    uint64_t budget = 850'000;
    uint64_t block = 65'536;
    fs::path dir = work_dir(8) / "g200k";
    std::error_code ec;
    fs::remove_all(dir, ec);  // the budget matters here; never reuse a stale store
    preprocess(buffer_from(g), dir, budget, block);
    BipartiteGraph graph = BipartiteGraph::open(dir);

    auto shards = graph.manifest().shards.size();
    double b_blocks = static_cast<double>(graph.manifest().dataset_bytes()) /
                      static_cast<double>(block);
    DetectionParams params = standard_params(10, 5, Mode::Promotion, 86400, 42, 500);
    DetectionReport report = run_detection(graph, params);

    bool pass = shards >= 4 && !report.meta.io_per_iteration.empty();
    uint64_t max_reads = 0, max_seeks = 0;
    for (const auto& io : report.meta.io_per_iteration) {
        max_reads = std::max(max_reads, io.block_reads);
        max_seeks = std::max(max_seeks, io.seeks);
        if (static_cast<double>(io.block_reads) > 2.0 * b_blocks) pass = false;
        if (static_cast<double>(io.seeks) > static_cast<double>(shards * shards)) pass = false;
    }
    std::printf("%s criterion 8: io contract with P=%zu shards: worst iteration %llu block reads "
                "(2B=%.1f), %llu seeks (P^2=%zu)\n",
                pass ? "PASS" : "FAIL", shards, static_cast<unsigned long long>(max_reads),
                2.0 * b_blocks, static_cast<unsigned long long>(max_seeks), shards * shards);
    return pass;
}

bool criterion_9() {
    int fixtures = 0, stable = 0;
    auto byte_identical = [&](const BipartiteGraph& graph, const DetectionParams& params) {
        ++fixtures;
        std::vector<std::string> dumps;
        for (int rep = 0; rep < 3; ++rep) {
            EngineOptions opts;  // single worker
            DetectionReport report = run_detection(graph, params, opts);
            fs::path out = work_dir(9) / ("rep" + std::to_string(fixtures) + "-" +
                                          std::to_string(rep) + ".json");
            write_report(report, out);
            std::ifstream in(out, std::ios::binary);
            dumps.emplace_back(std::istreambuf_iterator<char>(in),
                               std::istreambuf_iterator<char>());
        }
        if (dumps[0] == dumps[1] && dumps[1] == dumps[2] && !dumps[0].empty()) ++stable;
    };

    {
        SyntheticGraph g = generate_bipartite(500, 2000, 5000, 0, 10'000'000, 1301);
        BipartiteGraph graph = prepare(g, work_dir(9) / "plain", 1ull << 20, 1ull << 16);
        byte_identical(graph, standard_params(10, 5, Mode::Promotion, 86400, 7,
                                              static_cast<uint32_t>(suggest_seeds(5000))));
    }
    {
        SyntheticGraph g = generate_bipartite(2000, 8000, 50'000, 0, 10'000'000, 1302);
        AttackSpec spec;
        spec.n_users = 60;
        spec.n_products = 30;
        spec.delta_t = 86400;
        spec.mode = Mode::Promotion;
        spec.kappa = 4;
        spec.count = 2;
        inject_lockstep(g, spec, 1303);
        BipartiteGraph graph = prepare(g, work_dir(9) / "injected", 4ull << 20, 1ull << 18);
        byte_identical(graph, standard_params(30, 15, Mode::Promotion, 86400, 9,
                                              static_cast<uint32_t>(suggest_seeds(51'800))));
    }
    {
        SyntheticGraph g = generate_bipartite(1000, 4000, 20'000, 0, 10'000'000, 1304);
        BipartiteGraph graph = prepare(g, work_dir(9) / "defam", 1ull << 20, 1ull << 16);
        byte_identical(graph, standard_params(5, 3, Mode::Defamation, 86400, 13, 2000));
    }
    bool pass = fixtures == 3 && stable == 3;
    std::printf("%s criterion 9: determinism: %d/%d fixtures byte-identical across 3 "
                "single-worker repetitions\n",
                pass ? "PASS" : "FAIL", stable, fixtures);
    return pass;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8, 9};

    bool (*criteria[])() = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                            criterion_6, criterion_7, criterion_8, criterion_9};
    int failures = 0;
    for (int c : wanted) {
        if (c < 1 || c > 9) {
            std::fprintf(stderr, "unknown criterion %d\n", c);
            return 64;
        }
        if (!criteria[c - 1]()) ++failures;
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
