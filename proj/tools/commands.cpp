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

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "orfel/attack_gen.hpp"
#include "orfel/engine.hpp"
#include "orfel/graph_store.hpp"
#include "orfel/ingest.hpp"
#include "orfel/report_io.hpp"

namespace orfel::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// With --quiet, stdout carries only machine-readable output (artifact paths
// and JSON); everything informational moves to stderr.
struct Logger {
    bool quiet = false;
    std::ostream& info() const { return quiet ? std::cerr : std::cout; }
    void artifact(const std::string& path) const { std::cout << path << "\n"; }
};

std::string hash_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    Fnv1a64 hash;
    std::vector<char> buf(1 << 20);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        auto got = static_cast<size_t>(in.gcount());
        if (got == 0) break;
        hash.update(buf.data(), got);
    }
    if (in.bad()) throw IoError("read failure on " + path.string());
    return hash.hex();
}

struct IngestFlags {
    std::string separator = ",";
    bool skip_header = false;
    std::vector<uint32_t> columns = {0, 1, 2, 3};

    IngestOptions to_options() const {
        IngestOptions opts;
        if (separator.size() != 1) throw ConfigError("--sep must be a single character");
        opts.separator = separator[0];
        opts.skip_header = skip_header;
        if (columns.size() != 4) throw ConfigError("--columns needs 4 indices");
        std::copy(columns.begin(), columns.end(), opts.columns.begin());
        return opts;
    }
};

void add_ingest_flags(CLI::App* cmd, IngestFlags& flags) {
    cmd->add_option("--sep", flags.separator, "Field separator (default ,)");
    cmd->add_flag("--skip-header", flags.skip_header, "Skip the first line");
    cmd->add_option("--columns", flags.columns,
                    "Column indices of user,product,timestamp,rating")
        ->delimiter(',')
        ->expected(4);
}

EdgeBuffer ingest_file(const fs::path& path, const IngestFlags& flags) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return ingest(in, flags.to_options());
}

// ---------------------------------------------------------------------------
// preprocess
// ---------------------------------------------------------------------------

struct PreprocessArgs {
    std::string input;
    std::string out_dir;
    uint64_t memory_budget = 1ull << 30;
    uint64_t block_size = 0;  // 0: ORFEL_BLOCK_SIZE or 1 MiB
    bool force = false;
    IngestFlags ingest;
    Logger log;
};

int cmd_preprocess(const PreprocessArgs& args) {
    auto t0 = Clock::now();
    std::string input_hash = hash_file(args.input);
    uint64_t block = resolve_block_size(args.block_size);

    fs::path manifest_path = fs::path(args.out_dir) / "manifest.json";
    if (!args.force && fs::exists(manifest_path)) {
        auto existing = BipartiteGraph::open(args.out_dir).manifest();
        if (existing.input_hash == input_hash && existing.memory_budget == args.memory_budget &&
            existing.block_size == block) {
            args.log.info() << "up to date: " << manifest_path.string() << "\n";
            args.log.artifact(manifest_path.string());
            return kExitOk;
        }
    }

    EdgeBuffer buf = ingest_file(args.input, args.ingest);
    double ingest_sec = seconds_since(t0);
    if (buf.empty_input) std::cerr << "warning: input has no data lines\n";
    if (buf.rejected_lines > 0)
        std::cerr << "warning: rejected " << buf.rejected_lines << " of " << buf.total_lines
                  << " lines\n";

    auto t1 = Clock::now();
    GraphManifest m = preprocess(buf, args.out_dir, args.memory_budget, block, input_hash);
    double write_sec = seconds_since(t1);

    args.log.info() << "preprocessed " << m.num_edges << " edges (" << m.num_users << " users, "
                    << m.num_products << " products, " << m.shards.size() << " shards, "
                    << m.duplicate_edges << " duplicate pairs)\n"
                    << "ingest " << ingest_sec << " s, sort+write " << write_sec << " s, total "
                    << seconds_since(t0) << " s\n";
    args.log.artifact(manifest_path.string());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

struct DetectArgs {
    std::string graph_dir;
    std::string out = "report.json";
    DetectionParams params;
    std::string mode = "promotion";
    uint64_t seeds = 0;  // 0: suggest_seeds(numEdges)
    EngineOptions engine;
    Logger log;
};

int cmd_detect(const DetectArgs& args) {
    BipartiteGraph graph = BipartiteGraph::open(args.graph_dir);
    DetectionParams params = args.params;
    params.mode = parse_mode(args.mode);
    if (params.rho < 0.8)
        std::cerr << "warning: rho " << params.rho << " is below recommended 0.8; locksteps may degenerate\n";
    uint64_t seeds = args.seeds ? args.seeds : suggest_seeds(graph.num_edges());
    if (seeds > 0xffffffffull) throw ConfigError("seed count too large");
    params.n_seeds = static_cast<uint32_t>(seeds);
    params.validate();

    DetectionReport report = run_detection(graph, params, args.engine);
    write_report(report, args.out);

    args.log.info() << "detected " << report.locksteps.size() << " locksteps in "
                    << report.meta.iterations << " iterations ("
                    << (report.meta.converged ? "converged" : "hit iteration cap") << ", "
                    << report.meta.seeds_dead << "/" << report.meta.seeds_created
                    << " seeds dead)\n"
                    << "wall clock " << report.meta.wall_clock_sec << " s, io: "
                    << report.meta.io_total.seeks << " seeks, "
                    << report.meta.io_total.block_reads << " block reads, "
                    << report.meta.io_total.bytes_read << " bytes\n";
    args.log.artifact(args.out);
    return report.meta.converged ? kExitOk : kExitNonConverged;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenArgs {
    uint32_t users = 0;
    uint32_t products = 0;
    uint64_t edges = 0;
    uint64_t ts_lo = 0;
    uint64_t ts_hi = 10'000'000;
    uint64_t rng_seed = 1;
    bool with_replacement = false;
    std::string out;
    Logger log;
};

int cmd_gen(const GenArgs& args) {
    auto t0 = Clock::now();
    SyntheticGraph g = generate_bipartite(args.users, args.products, args.edges, args.ts_lo,
                                          args.ts_hi, args.rng_seed, args.with_replacement);
    write_edge_text(g, args.out);
    args.log.info() << "generated " << g.edges.size() << " edges over " << g.num_users
                    << " users x " << g.num_products << " products (rngSeed " << args.rng_seed
                    << ") in " << seconds_since(t0) << " s\n";
    args.log.artifact(args.out);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// inject
// ---------------------------------------------------------------------------

struct InjectArgs {
    std::string input;
    std::string out;
    std::string truth = "truth.json";
    std::string spec_file;
    uint32_t attack_users = 0;
    uint32_t attack_products = 0;
    uint64_t delta_t = 86400;
    std::string mode = "both";
    uint32_t kappa = 0;  // 0: 2 for defamation, 4 for promotion
    uint32_t attacks = 1;
    uint64_t rng_seed = 1;
    IngestFlags ingest;
    Logger log;
};

std::string format_edge_line(const IngestFlags& flags, const std::string& user,
                             const std::string& product, uint64_t ts, uint32_t weight) {
    uint32_t width = *std::max_element(flags.columns.begin(), flags.columns.end()) + 1;
    std::vector<std::string> fields(width, "0");
    fields[flags.columns[0]] = user;
    fields[flags.columns[1]] = product;
    fields[flags.columns[2]] = std::to_string(ts);
    fields[flags.columns[3]] = std::to_string(weight);
    std::string line;
    for (uint32_t i = 0; i < width; ++i) {
        if (i) line += flags.separator[0];
        line += fields[i];
    }
    return line;
}

int cmd_inject(const InjectArgs& args) {
    EdgeBuffer buf = ingest_file(args.input, args.ingest);
    if (buf.edges.empty()) throw ConfigError("inject: host graph has no edges");

    std::vector<AttackSpec> specs;
    auto make_spec = [&](Mode mode, uint32_t count) {
        AttackSpec s;
        s.n_users = args.attack_users;
        s.n_products = args.attack_products;
        s.delta_t = args.delta_t;
        s.mode = mode;
        s.kappa = args.kappa ? static_cast<uint8_t>(args.kappa)
                             : (mode == Mode::Defamation ? uint8_t{2} : uint8_t{4});
        s.count = count;
        return s;
    };
    if (!args.spec_file.empty()) {
        std::ifstream in(args.spec_file, std::ios::binary);
        if (!in) throw IoError("cannot open " + args.spec_file);
        nlohmann::json j;
        in >> j;
        specs.push_back(attack_spec_from_json(j));
    } else if (args.mode == "both") {
        uint32_t def = args.attacks / 2;
        uint32_t promo = args.attacks - def;
        if (def > 0) specs.push_back(make_spec(Mode::Defamation, def));
        if (promo > 0) specs.push_back(make_spec(Mode::Promotion, promo));
    } else {
        specs.push_back(make_spec(parse_mode(args.mode), args.attacks));
    }

    SyntheticGraph host;
    host.num_users = buf.num_users();
    host.num_products = buf.num_products();
    host.edges = std::move(buf.edges);
    size_t original_edges = host.edges.size();

    GroundTruth truth;
    uint64_t seed = args.rng_seed;
    for (const auto& spec : specs) {
        GroundTruth part = inject_lockstep(host, spec, seed++);
        for (auto& a : part.attacks) truth.attacks.push_back(std::move(a));
    }

    // Copy the host file byte for byte, then append the injected edges in the
    // same schema; the original graph stays intact as a prefix.
    {
        std::ifstream in(args.input, std::ios::binary);
        if (!in) throw IoError("cannot open " + args.input);
        std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + args.out + " for writing");
        out << in.rdbuf();
        if (in.bad() || !out) throw IoError("copy failure");
        in.clear();
        in.seekg(-1, std::ios::end);
        char last = '\n';
        if (in.good() && in.get(last) && last != '\n') out << '\n';
        for (size_t i = original_edges; i < host.edges.size(); ++i) {
            const auto& e = host.edges[i];
            out << format_edge_line(args.ingest, buf.user_ids[e.user], buf.product_ids[e.product],
                                    e.timestamp, e.weight)
                << '\n';
        }
        out.flush();
        if (!out) throw IoError("write failure on " + args.out);
    }

    NamedGroundTruth named = name_ground_truth(truth, &buf.user_ids, &buf.product_ids);
    write_ground_truth(named, specs.size() == 1 ? &specs[0] : nullptr, args.rng_seed, args.truth);

    args.log.info() << "injected " << truth.attacks.size() << " attacks ("
                    << host.edges.size() - original_edges << " edges) into " << args.out << "\n";
    args.log.artifact(args.truth);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::vector<std::string> reports;
    std::string truth;
    double coverage = 0.8;
    std::string out;
    Logger log;
};

int cmd_eval(const EvalArgs& args) {
    std::vector<ReportedLockstep> locksteps;
    for (const auto& path : args.reports) {
        DetectionReport r = read_report(path);
        for (auto& l : r.locksteps) locksteps.push_back(std::move(l));
    }
    NamedGroundTruth truth = read_ground_truth(args.truth);
    RecallResult result = evaluate_recall(locksteps, truth, args.coverage);

    auto& os = args.log.info();
    os << "attack  mode        caught  lockstep  users  products\n";
    for (size_t i = 0; i < result.per_attack.size(); ++i) {
        const auto& a = result.per_attack[i];
        char line[128];
        std::snprintf(line, sizeof(line), "%-7zu %-11s %-7s %-9d %-6llu %llu\n", i,
                      mode_name(truth.attacks[i].mode), a.caught ? "yes" : "no", a.lockstep,
                      static_cast<unsigned long long>(a.user_overlap),
                      static_cast<unsigned long long>(a.product_overlap));
        os << line;
    }
    os << "recall " << result.caught << "/" << result.total << " = " << result.recall
       << " (coverage " << result.coverage << ")\n";
    if (!args.out.empty()) {
        std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + args.out);
        out << recall_to_json(result).dump(2) << '\n';
        args.log.artifact(args.out);
    } else if (args.log.quiet) {
        std::cout << recall_to_json(result).dump(2) << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
    std::string suite = "edges";
    std::string out = "bench.csv";
    std::string workdir = "bench-work";
    std::vector<uint64_t> edges = {1'000'000, 2'000'000, 4'000'000, 8'000'000};
    std::vector<uint64_t> seed_counts = {100, 500, 1000, 5000};
    uint32_t repeats = 2;
    uint64_t rng_seed = 1;
    uint32_t threads = 1;
    uint64_t memory_budget = 0;  // 0: dataset/8, at least 4 blocks
    Logger log;
};

struct LinearFit {
    double slope = 0, intercept = 0, r2 = 0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LinearFit f;
    double denom = n * sxx - sx * sx;
    if (denom == 0) return f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0, mean = sy / n;
    for (size_t i = 0; i < n; ++i) {
        double fit = f.slope * x[i] + f.intercept;
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    f.r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return f;
}

// Generates (or reuses) a synthetic graph with the Synthetic.C shape
// (product side 4x the user side, mean product degree 12.5) and preprocesses
// it under the given budget.
fs::path bench_graph(const BenchArgs& args, uint64_t edges) {
    fs::create_directories(args.workdir);
    fs::path text = fs::path(args.workdir) /
                    ("gen_e" + std::to_string(edges) + "_s" + std::to_string(args.rng_seed) + ".txt");
    if (!fs::exists(text)) {
        auto users = static_cast<uint32_t>(std::max<uint64_t>(10, edges / 50));
        auto products = static_cast<uint32_t>(std::max<uint64_t>(10, edges / 12));
        SyntheticGraph g =
            generate_bipartite(users, products, edges, 0, 10'000'000, args.rng_seed);
        write_edge_text(g, text);
    }
    fs::path dir = fs::path(args.workdir) / ("graph_e" + std::to_string(edges) + "_s" +
                                             std::to_string(args.rng_seed));
    uint64_t block = resolve_block_size(0);
    uint64_t budget = args.memory_budget;
    if (budget == 0) budget = std::max<uint64_t>(edges * kRecordBytes / 8, 4 * block);
    PreprocessArgs pa;
    pa.input = text.string();
    pa.out_dir = dir.string();
    pa.memory_budget = budget;
    pa.log.quiet = true;
    cmd_preprocess(pa);
    return dir;
}

int cmd_bench(const BenchArgs& args) {
    DetectionParams params;
    params.min_users = 50;
    params.min_products = 25;
    params.rho = 0.8;
    params.delta_t = 86400;
    params.kappa = 4;
    params.mode = Mode::Promotion;
    params.rng_seed = args.rng_seed;

    EngineOptions opts;
    opts.threads = args.threads;

    std::ofstream csv(args.out, std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError("cannot open " + args.out);
    bool edge_suite = args.suite == "edges";
    if (!edge_suite && args.suite != "seeds")
        throw ConfigError("--suite must be edges or seeds");
    csv << (edge_suite ? "edges" : "seeds") << ",wall_clock_sec,seeks,block_reads\n";

    auto run_once = [&](const fs::path& dir, uint64_t seeds) {
        BipartiteGraph graph = BipartiteGraph::open(dir);
        DetectionParams p = params;
        p.n_seeds = static_cast<uint32_t>(seeds);
        DetectionReport best;
        for (uint32_t r = 0; r < std::max(1u, args.repeats); ++r) {
            DetectionReport rep = run_detection(graph, p, opts);
            if (r == 0 || rep.meta.wall_clock_sec < best.meta.wall_clock_sec) best = std::move(rep);
        }
        return best;
    };

    std::vector<double> xs, ys;
    if (edge_suite) {
        for (uint64_t edges : args.edges) {
            fs::path dir = bench_graph(args, edges);
            DetectionReport rep = run_once(dir, 100);
            csv << edges << "," << rep.meta.wall_clock_sec << "," << rep.meta.io_total.seeks
                << "," << rep.meta.io_total.block_reads << "\n";
            args.log.info() << edges << " edges: " << rep.meta.wall_clock_sec << " s, "
                            << rep.meta.iterations << " iterations\n";
            xs.push_back(static_cast<double>(edges));
            ys.push_back(rep.meta.wall_clock_sec);
        }
        LinearFit f = fit_line(xs, ys);
        csv << "# fit slope=" << f.slope << " intercept=" << f.intercept << " r2=" << f.r2
            << "\n";
        args.log.info() << "linear fit: slope " << f.slope << " s/edge, intercept " << f.intercept
                        << " s, R^2 " << f.r2 << "\n";
    } else {
        fs::path dir = bench_graph(args, args.edges.front());
        for (uint64_t seeds : args.seed_counts) {
            DetectionReport rep = run_once(dir, seeds);
            csv << seeds << "," << rep.meta.wall_clock_sec << "," << rep.meta.io_total.seeks
                << "," << rep.meta.io_total.block_reads << "\n";
            args.log.info() << seeds << " seeds: " << rep.meta.wall_clock_sec << " s, "
                            << rep.meta.iterations << " iterations\n";
            xs.push_back(static_cast<double>(seeds));
            ys.push_back(rep.meta.wall_clock_sec);
        }
        if (ys.size() >= 2 && ys.front() > 0) {
            double runtime_ratio = ys.back() / ys.front();
            double seed_ratio = xs.back() / xs.front();
            csv << "# ratio runtime=" << runtime_ratio << " seeds=" << seed_ratio << "\n";
            args.log.info() << "runtime ratio " << runtime_ratio << " for a " << seed_ratio
                            << "x seed increase\n";
        }
    }
    csv.flush();
    if (!csv) throw IoError("write failure on " + args.out);
    args.log.artifact(args.out);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"out-of-core lockstep detection in weighted bipartite recommendation graphs"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file; command line flags take precedence");
    app.set_version_flag("--version", "orfel 0.1.0");

    bool quiet = false;
    app.add_flag("--quiet", quiet, "Machine-readable stdout only");

    int rc = kExitOk;

    PreprocessArgs pre;
    auto* cpre = app.add_subcommand("preprocess", "Convert a text edge list to the binary store");
    cpre->add_option("--input", pre.input, "Input edge list")->required();
    cpre->add_option("--out", pre.out_dir, "Output graph directory")->required();
    cpre->add_option("--memory-budget", pre.memory_budget, "Shard memory budget in bytes");
    cpre->add_option("--block-size", pre.block_size, "Block size in bytes (also ORFEL_BLOCK_SIZE)");
    cpre->add_flag("--force", pre.force, "Rebuild even when up to date");
    add_ingest_flags(cpre, pre.ingest);
    cpre->callback([&] {
        pre.log.quiet = quiet;
        rc = cmd_preprocess(pre);
    });

    DetectArgs det;
    auto* cdet = app.add_subcommand("detect", "Run lockstep detection on a preprocessed graph");
    cdet->add_option("--graph", det.graph_dir, "Preprocessed graph directory")->required();
    cdet->add_option("--out", det.out, "Report path (JSON)");
    cdet->add_option("--n", det.params.min_users, "Minimum users per lockstep");
    cdet->add_option("--m", det.params.min_products, "Minimum products per lockstep");
    cdet->add_option("--rho", det.params.rho, "Tolerance fraction in (0,1]");
    cdet->add_option("--dt", det.params.delta_t, "Half window width in seconds");
    uint32_t kappa = 4;
    cdet->add_option("--kappa", kappa, "Weight threshold");
    cdet->add_option("--mode", det.mode, "defamation or promotion")->required();
    cdet->add_option("--seeds", det.seeds, "Seed count (default 1000*log10(edges))");
    cdet->add_option("--rng-seed", det.params.rng_seed, "RNG seed, recorded in the report");
    cdet->add_option("--initial-users", det.params.initial_users_per_seed,
                     "Users per initial seed");
    cdet->add_option("--threads", det.engine.threads, "Worker threads");
    cdet->add_option("--max-iters", det.engine.max_iterations, "Iteration cap");
    cdet->callback([&] {
        det.log.quiet = quiet;
        det.params.kappa = static_cast<uint8_t>(kappa);
        rc = cmd_detect(det);
    });

    GenArgs gen;
    auto* cgen = app.add_subcommand("gen", "Generate a random bipartite graph");
    cgen->add_option("--users", gen.users, "User count")->required();
    cgen->add_option("--products", gen.products, "Product count")->required();
    cgen->add_option("--edges", gen.edges, "Edge count")->required();
    cgen->add_option("--ts-lo", gen.ts_lo, "Timestamp range low");
    cgen->add_option("--ts-hi", gen.ts_hi, "Timestamp range high");
    cgen->add_option("--rng-seed", gen.rng_seed, "RNG seed");
    cgen->add_flag("--with-replacement", gen.with_replacement, "Allow duplicate pairs");
    cgen->add_option("--out", gen.out, "Output edge list")->required();
    cgen->callback([&] {
        gen.log.quiet = quiet;
        rc = cmd_gen(gen);
    });

    InjectArgs inj;
    auto* cinj = app.add_subcommand("inject", "Append ground-truth lockstep attacks");
    cinj->add_option("--input", inj.input, "Host edge list")->required();
    cinj->add_option("--out", inj.out, "Output edge list")->required();
    cinj->add_option("--truth", inj.truth, "Ground truth path (JSON)");
    cinj->add_option("--spec", inj.spec_file, "Attack spec JSON (overrides the flags)");
    cinj->add_option("--attack-users", inj.attack_users, "Users per attack");
    cinj->add_option("--attack-products", inj.attack_products, "Products per attack");
    cinj->add_option("--dt", inj.delta_t, "Attack half window in seconds");
    cinj->add_option("--mode", inj.mode, "defamation, promotion or both");
    cinj->add_option("--kappa", inj.kappa, "Weight threshold (default 2 def / 4 promo)");
    cinj->add_option("--attacks", inj.attacks, "Number of attacks (both: split half/half)");
    cinj->add_option("--rng-seed", inj.rng_seed, "RNG seed");
    add_ingest_flags(cinj, inj.ingest);
    cinj->callback([&] {
        inj.log.quiet = quiet;
        rc = cmd_inject(inj);
    });

    EvalArgs ev;
    auto* cev = app.add_subcommand("eval", "Score detection recall against ground truth");
    cev->add_option("--report", ev.reports, "Report JSON (repeatable; merged)")->required();
    cev->add_option("--truth", ev.truth, "Ground truth JSON")->required();
    cev->add_option("--coverage", ev.coverage, "Overlap fraction for a catch");
    cev->add_option("--out", ev.out, "Write the recall table as JSON");
    cev->callback([&] {
        ev.log.quiet = quiet;
        rc = cmd_eval(ev);
    });

    BenchArgs bench;
    auto* cb = app.add_subcommand("bench", "Edge and seed scaling sweeps");
    cb->add_option("--suite", bench.suite, "edges or seeds");
    cb->add_option("--out", bench.out, "CSV output path");
    cb->add_option("--workdir", bench.workdir, "Scratch directory for generated graphs");
    cb->add_option("--edges", bench.edges, "Edge counts (edges suite) or fixed size (seeds suite)")
        ->delimiter(',');
    cb->add_option("--seed-counts", bench.seed_counts, "Seed counts for the seeds suite")
        ->delimiter(',');
    cb->add_option("--repeats", bench.repeats, "Detect runs per row (min is kept)");
    cb->add_option("--rng-seed", bench.rng_seed, "RNG seed");
    cb->add_option("--threads", bench.threads, "Worker threads");
    cb->add_option("--memory-budget", bench.memory_budget, "Budget override in bytes");
    cb->callback([&] {
        bench.log.quiet = quiet;
        rc = cmd_bench(bench);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.push_back("orfel");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const auto& a : full) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace orfel::cli
