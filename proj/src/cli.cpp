#include "gna/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gna/errors.hpp"
#include "gna/evaluate.hpp"
#include "gna/exact_oracle.hpp"
#include "gna/graph_io.hpp"
#include "gna/instance.hpp"
#include "gna/solver.hpp"

namespace gna {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    out << content;
}

// graph format by content: XML-ish input is GraphML, everything else GML
Network load_network(const std::string& path, std::vector<std::string>* warnings) {
    std::string text = read_file(path);
    size_t first = text.find_first_not_of(" \t\r\n");
    try {
        if (first != std::string::npos && text[first] == '<')
            return parse_graphml(text, warnings);
        return parse_gml(text, warnings);
    } catch (const ParseError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

struct ScoringOptions {
    std::string sim_path;
    std::string sim_kind = "evalue";
    std::optional<double> threshold;
    std::string mode = "topology";
    double beta = 0.5;

    SimilarityKind kind() const {
        return sim_kind == "bitscore" ? SimilarityKind::bitscore : SimilarityKind::evalue;
    }
    double resolved_threshold() const {
        if (threshold)
            return *threshold;
        return kind() == SimilarityKind::evalue ? 100.0 : 0.0;
    }
    ScoreSpec spec() const {
        if (mode == "blended")
            return {ScoreMode::blended, beta};
        return {ScoreMode::topology_only, 1.0};
    }

    void add_options(CLI::App* cmd, bool sim_required) {
        auto* sim = cmd->add_option("--sim", sim_path, "node-similarity TSV (id1 id2 value)")
                        ->check(CLI::ExistingFile);
        if (sim_required)
            sim->required();
        cmd->add_option("--sim-kind", sim_kind, "similarity statistic")
            ->check(CLI::IsMember({"evalue", "bitscore"}))
            ->capture_default_str();
        cmd->add_option("--threshold", threshold,
                        "candidate filter: keep e-value <= t or bitscore >= t "
                        "(default 100 for e-values, 0 for bitscores)");
        cmd->add_option("--mode", mode, "scoring mode")
            ->check(CLI::IsMember({"topology", "blended"}))
            ->capture_default_str();
        cmd->add_option("--beta", beta, "topology weight in blended mode")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
    }

    AlignmentInstance build(const Network& g1, const Network& g2,
                            std::vector<std::string>* warnings) const {
        if (sim_path.empty()) {
            // no similarity data: complete candidate graph
            return make_complete_instance(g1, g2, spec());
        }
        SimilarityTable table = parse_similarity_tsv(read_file(sim_path), kind());
        return build_instance(g1, g2, table, resolved_threshold(), spec(), warnings);
    }
};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string alignment_tsv(const AlignmentInstance& inst, const Alignment& a) {
    std::string out;
    for (int i = 0; i < inst.n1(); ++i)
        if (a.target[i] >= 0)
            out += inst.g1().id(i) + "\t" + inst.g2().id(a.target[i]) + "\n";
    return out;
}

std::string trace_tsv(const SolveReport& report) {
    std::string out = "iter\tphase\tZ_LD\tZ_lb\tstep_size\telapsed_s\n";
    for (const auto& row : report.trace) {
        out += std::to_string(row.iter) + "\t" + to_string(row.phase) + "\t" +
               format_double(row.z_ld) + "\t" + format_double(row.z_lb) + "\t" +
               format_double(row.step_size) + "\t" + format_double(row.elapsed_s) + "\n";
    }
    return out;
}

Alignment parse_alignment_tsv(const std::string& text, const AlignmentInstance& inst) {
    Alignment a(inst.n1());
    int lineno = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ConfigError("alignment line " + std::to_string(lineno) + ": expected id1<TAB>id2");
        std::string id1 = line.substr(0, tab), id2 = line.substr(tab + 1);
        auto i = inst.g1().index_of(id1);
        if (!i)
            throw ConfigError("alignment id '" + id1 + "' not found in first network");
        auto k = inst.g2().index_of(id2);
        if (!k)
            throw ConfigError("alignment id '" + id2 + "' not found in second network");
        if (a.target[*i] >= 0)
            throw ConfigError("alignment maps '" + id1 + "' twice");
        a.target[*i] = *k;
    }
    validate_alignment(inst, a);
    return a;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file(path, content);
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << "\n";
}

// ---------------------------------------------------------------- align cmd

struct AlignOptions {
    std::string g1_path, g2_path, annotations_path;
    ScoringOptions scoring;
    SolverParams params;
    bool exact = false;
    std::string out_alignment, out_summary = "-", out_trace;
};

int cmd_align(const AlignOptions& opt) {
    std::vector<std::string> warnings;
    Network g1 = load_network(opt.g1_path, &warnings);
    Network g2 = load_network(opt.g2_path, &warnings);
    if (!opt.annotations_path.empty()) {
        auto rows = parse_annotations_tsv(read_file(opt.annotations_path));
        attach_annotations(g1, rows);
        attach_annotations(g2, rows);
    }
    AlignmentInstance inst = opt.scoring.build(g1, g2, &warnings);
    print_warnings(warnings);

    auto start = std::chrono::steady_clock::now();
    SolveReport report;
    std::string termination;
    if (opt.exact) {
        ExactResult exact = solve_exact(inst);
        report.best_lb = report.best_ub = exact.value;
        report.best_alignment = std::move(exact.alignment);
        termination = "exact";
    } else {
        report = solve(inst, opt.params);
        termination = to_string(report.termination);
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ordered_json summary;
    summary["best_lb"] = report.best_lb;
    summary["best_ub"] = report.best_ub;
    summary["gap"] = report.best_ub - report.best_lb;
    summary["mapped_nodes"] = report.best_alignment.mapped_count();
    summary["conserved"] = conserved_edges(inst, report.best_alignment);
    if (inst.g1().edge_count() > 0 && inst.g2().edge_count() > 0)
        summary["edge_correctness"] = edge_correctness(inst, report.best_alignment);
    else
        summary["edge_correctness"] = nullptr;
    if (!opt.annotations_path.empty()) {
        auto c = coherence(inst, report.best_alignment);
        if (c)
            summary["coherence"] = *c;
        else
            summary["coherence"] = nullptr;
    }
    summary["termination"] = termination;
    summary["evaluations"] = report.evaluations;
    summary["wall_time_s"] = wall;

    if (!opt.out_alignment.empty())
        write_file(opt.out_alignment, alignment_tsv(inst, report.best_alignment));
    if (!opt.out_trace.empty())
        write_file(opt.out_trace, trace_tsv(report));
    emit(opt.out_summary, summary.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------- bench cmd

struct BenchOptions {
    std::string kind;
    int k = 4, host_n = 10, n = 10, n1 = 10, n2 = 10;
    double host_p = 0.2, p = 0.3, p1 = 0.3, p2 = 0.3, flip_rate = 0.0;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

std::string similarity_tsv(const SimilarityTable& sim) {
    std::string out;
    for (const auto& e : sim.entries)
        out += e.id1 + "\t" + e.id2 + "\t" + format_double(e.value) + "\n";
    return out;
}

int cmd_bench(const BenchOptions& opt) {
    BenchmarkKind kind;
    if (opt.kind == "planted_clique")
        kind = PlantedClique{opt.k, opt.host_n, opt.host_p};
    else if (opt.kind == "noisy_copy")
        kind = NoisyCopy{opt.n, opt.p, opt.flip_rate};
    else
        kind = RandomPair{opt.n1, opt.p1, opt.n2, opt.p2};

    Benchmark bench = generate_benchmark(kind, opt.seed);
    std::filesystem::create_directories(opt.out_dir);
    auto path = [&](const char* name) {
        return (std::filesystem::path(opt.out_dir) / name).string();
    };
    write_file(path("g1.gml"), write_gml(bench.g1));
    write_file(path("g2.gml"), write_gml(bench.g2));
    write_file(path("sim.tsv"), similarity_tsv(bench.sim));

    ordered_json oracle;
    oracle["kind"] = opt.kind;
    oracle["seed"] = opt.seed;
    try {
        AlignmentInstance inst =
            build_instance(bench.g1, bench.g2, bench.sim, 100.0, {ScoreMode::topology_only, 1.0});
        oracle["optimum"] = solve_exact(inst).value;
    } catch (const ConfigError&) {
        oracle["optimum"] = nullptr; // enumeration budget exceeded
    }
    write_file(path("oracle.json"), oracle.dump(2) + "\n");
    return 0;
}

// ----------------------------------------------------------------- eval cmd

struct EvalOptions {
    std::string g1_path, g2_path, alignment_path, annotations_path;
    ScoringOptions scoring;
    std::string out_summary = "-";
};

int cmd_eval(const EvalOptions& opt) {
    std::vector<std::string> warnings;
    Network g1 = load_network(opt.g1_path, &warnings);
    Network g2 = load_network(opt.g2_path, &warnings);
    if (!opt.annotations_path.empty()) {
        auto rows = parse_annotations_tsv(read_file(opt.annotations_path));
        attach_annotations(g1, rows);
        attach_annotations(g2, rows);
    }
    AlignmentInstance inst = opt.scoring.build(g1, g2, &warnings);
    print_warnings(warnings);
    Alignment a = parse_alignment_tsv(read_file(opt.alignment_path), inst);

    ordered_json out;
    out["score"] = score_alignment(inst, a);
    out["conserved"] = conserved_edges(inst, a);
    if (inst.g1().edge_count() > 0 && inst.g2().edge_count() > 0)
        out["edge_correctness"] = edge_correctness(inst, a);
    else
        out["edge_correctness"] = nullptr;
    auto c = coherence(inst, a);
    if (c)
        out["coherence"] = *c;
    else
        out["coherence"] = nullptr;
    out["mapped_nodes"] = a.mapped_count();
    emit(opt.out_summary, out.dump(2) + "\n");
    return 0;
}

void add_solver_options(CLI::App* cmd, SolverParams& params, bool& exact) {
    cmd->add_option("-K,--rounds", params.rounds, "rounds of subgradient + dual descent")
        ->capture_default_str();
    cmd->add_option("-L,--descent-sweeps", params.descent_sweeps,
                    "dual-descent sweeps per round")
        ->capture_default_str();
    cmd->add_option("-M,--improve-streak", params.improve_streak,
                    "consecutive improvements that double the step")
        ->capture_default_str();
    cmd->add_option("-N,--stagnation-streak", params.stagnation_streak,
                    "consecutive stagnations that halve the step")
        ->capture_default_str();
    cmd->add_option("--phi", params.phi, "dual-descent damping")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--tau", params.tau, "dual-descent pi weight")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--time-limit", params.time_limit_s, "wall-clock limit in seconds");
    cmd->add_option("--max-iters", params.max_evaluations, "cap on bound evaluations");
    cmd->add_option("--threads", params.threads, "parallelism of the bound evaluation")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--exact", exact, "solve exhaustively (small instances only)");
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"pairwise global network alignment via Lagrangian relaxation"};
    app.require_subcommand(1);

    AlignOptions align;
    auto* align_cmd = app.add_subcommand(
        "align", "align two networks and report certified bounds");
    align_cmd->add_option("--g1", align.g1_path, "first network (GML or GraphML)")
        ->required()
        ->check(CLI::ExistingFile);
    align_cmd->add_option("--g2", align.g2_path, "second network (GML or GraphML)")
        ->required()
        ->check(CLI::ExistingFile);
    align.scoring.add_options(align_cmd, false);
    align_cmd->add_option("--annotations", align.annotations_path,
                          "annotation TSV (id term), ancestor-closed")
        ->check(CLI::ExistingFile);
    add_solver_options(align_cmd, align.params, align.exact);
    align_cmd->add_option("--out-alignment", align.out_alignment, "alignment TSV output path");
    align_cmd->add_option("--out-summary", align.out_summary,
                          "summary JSON output path ('-' = stdout)");
    align_cmd->add_option("--out-trace", align.out_trace, "per-iteration trace TSV path");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "generate a benchmark instance");
    bench_cmd->add_option("--kind", bench.kind, "benchmark family")
        ->required()
        ->check(CLI::IsMember({"planted_clique", "noisy_copy", "random_pair"}));
    bench_cmd->add_option("--k", bench.k, "clique size")->capture_default_str();
    bench_cmd->add_option("--host-n", bench.host_n, "host node count")->capture_default_str();
    bench_cmd->add_option("--host-p", bench.host_p, "host edge probability")
        ->capture_default_str();
    bench_cmd->add_option("--n", bench.n, "node count")->capture_default_str();
    bench_cmd->add_option("--p", bench.p, "edge probability")->capture_default_str();
    bench_cmd->add_option("--flip-rate", bench.flip_rate, "edge perturbation rate")
        ->capture_default_str();
    bench_cmd->add_option("--n1", bench.n1, "first node count")->capture_default_str();
    bench_cmd->add_option("--p1", bench.p1, "first edge probability")->capture_default_str();
    bench_cmd->add_option("--n2", bench.n2, "second node count")->capture_default_str();
    bench_cmd->add_option("--p2", bench.p2, "second edge probability")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "generator seed")->capture_default_str();
    bench_cmd->add_option("--out-dir", bench.out_dir, "output directory")
        ->capture_default_str();

    EvalOptions eval;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate an existing alignment");
    eval_cmd->add_option("--g1", eval.g1_path, "first network")->required()->check(
        CLI::ExistingFile);
    eval_cmd->add_option("--g2", eval.g2_path, "second network")->required()->check(
        CLI::ExistingFile);
    eval_cmd->add_option("--alignment", eval.alignment_path, "alignment TSV (id1 id2)")
        ->required()
        ->check(CLI::ExistingFile);
    eval.scoring.add_options(eval_cmd, false);
    eval_cmd->add_option("--annotations", eval.annotations_path, "annotation TSV")
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--out-summary", eval.out_summary,
                         "report JSON output path ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (align_cmd->parsed())
            return cmd_align(align);
        if (bench_cmd->parsed())
            return cmd_bench(bench);
        return cmd_eval(eval);
    } catch (const InvariantError& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace gna
