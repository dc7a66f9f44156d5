#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wa/bench.hpp"
#include "wa/exact.hpp"
#include "wa/graph.hpp"
#include "wa/qubo.hpp"
#include "wa/solver.hpp"

namespace fs = std::filesystem;

namespace {

std::string default_output_dir() {
    const char* env = std::getenv("WA_OUTPUT_DIR");
    return env ? env : ".";
}

wa::Graph load_graph_any(const std::string& path) {
    if (fs::path(path).extension() == ".json") {
        wa::PathInstance inst = wa::load_path_instance(path);
        return wa::conflict_graph(inst);
    }
    return wa::load_dimacs(path);
}

std::string canonical_solver(const std::string& name) {
    if (name == "ldf") return wa::solver_tag::kLdf;
    if (name == "simcim" || name == "simcim-proposed") return wa::solver_tag::kSimcimProposed;
    if (name == "simcim-bs" || name == "simcim-binary-search")
        return wa::solver_tag::kSimcimBinarySearch;
    if (name == "exact") return wa::solver_tag::kExact;
    throw CLI::ValidationError("--solver", "unknown solver '" + name + "'");
}

struct AnnealFlags {
    int iterations = 0;  // 0 = scale with problem size
    int attempts = 32;
    double sigma = 0.15;
    double zeta = 0.0;
    double step = 0.05;
    double cap = 1.0;
    double pump_start = -1.0;
    double pump_end = 1.0;
    int threads = 1;
    int retries = 1;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--iterations", iterations, "annealer iterations (0: auto-scale)");
        cmd->add_option("--attempts", attempts, "parallel restarts");
        cmd->add_option("--sigma", sigma, "noise scale");
        cmd->add_option("--zeta", zeta, "feedforward factor (<=0: auto)");
        cmd->add_option("--step", step, "update scale");
        cmd->add_option("--cap", cap, "gradient quantization cap");
        cmd->add_option("--pump-start", pump_start, "pump ramp start");
        cmd->add_option("--pump-end", pump_end, "pump ramp end");
        cmd->add_option("--threads", threads, "attempt-level threads");
        cmd->add_option("--retries", retries, "annealer retries per color bound");
    }

    wa::AnnealParams to_params(std::uint64_t seed, double time_limit) const {
        wa::AnnealParams p;
        p.n_iterations = iterations;
        p.n_attempts = attempts;
        p.sigma = sigma;
        p.zeta = zeta;
        p.step = step;
        p.quantization_cap = cap;
        p.pump_start = pump_start;
        p.pump_end = pump_end;
        p.n_threads = threads;
        p.seed = seed;
        p.time_limit_s = time_limit;
        return p;
    }
};

struct PenaltyFlags {
    std::string mode = "heuristic";
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double p = -1.0;  // known edge probability for the heuristic formula

    void add_to(CLI::App* cmd) {
        cmd->add_option("--penalties", mode, "heuristic|certified|explicit")
            ->check(CLI::IsMember({"heuristic", "certified", "explicit"}));
        cmd->add_option("--c0", c0, "explicit objective weight");
        cmd->add_option("--c1", c1, "explicit constraint weight");
        cmd->add_option("--c2", c2, "explicit indicator weight");
        cmd->add_option("--p", p, "edge probability for heuristic penalties");
    }

    wa::PenaltyPolicy to_policy() const {
        if (mode == "certified") return wa::PenaltyPolicy::certified();
        if (mode == "explicit") {
            if (c0 <= 0.0 || c1 <= 0.0 || c2 <= 0.0)
                throw CLI::ValidationError("--penalties", "explicit penalties must be positive");
            return wa::PenaltyPolicy::explicit_values({c0, c1, c2, false});
        }
        std::optional<double> known;
        if (p >= 0.0) known = p;
        return wa::PenaltyPolicy::heuristic(known);
    }
};

int cmd_gen(const std::string& dataset, int n, double p, std::uint64_t seed, int max_n,
            int instances, const std::string& output) {
    if (!dataset.empty()) {
        if (dataset != "default") throw CLI::ValidationError("--dataset", "only 'default' exists");
        wa::DatasetSpec spec = wa::DatasetSpec::defaults();
        if (seed != wa::kDefaultDatasetSeed) spec.base_seed = seed;
        std::erase_if(spec.node_counts, [&](int nc) { return nc > max_n; });
        if (instances > 0) spec.instances_per_cell = instances;
        wa::Manifest m = wa::generate_dataset(spec, output);
        std::cout << "wrote " << m.cells.size() << " instances to " << output << "\n";
        return 0;
    }
    std::uint64_t used = seed;
    wa::Graph g = wa::erdos_renyi(n, p, seed, &used);
    wa::save_dimacs(g, output);
    std::cout << "n=" << g.n_vertices() << " edges=" << g.n_edges() << " seed=" << used
              << " connected=1 -> " << output << "\n";
    return 0;
}

int cmd_solve(const std::string& input, const std::string& solver_name, const std::string& output,
              std::uint64_t seed, double time_limit, const AnnealFlags& anneal,
              const PenaltyFlags& penalties, bool stable_output, const std::string& trace_path) {
    wa::Graph g = load_graph_any(input);
    const std::string solver = canonical_solver(solver_name);
    wa::ColoringSolution sol;

    if (solver == wa::solver_tag::kLdf) {
        sol = wa::ldf_coloring(g);
    } else if (solver == wa::solver_tag::kExact) {
        wa::ExactColoringResult r = wa::chromatic_number(g, time_limit);
        sol.solver = wa::solver_tag::kExact;
        sol.colors = r.witness;
        sol.n_colors = r.timed_out ? r.upper_bound : r.chromatic_number;
        sol.feasible = true;
        sol.energy = sol.n_colors;
        sol.wall_time_s = r.wall_time_s;
        sol.truncated = r.timed_out;
        if (r.timed_out)
            std::cerr << "exact search timed out; bounds [" << r.lower_bound << ", "
                      << r.upper_bound << "]\n";
    } else if (solver == wa::solver_tag::kSimcimProposed) {
        sol = wa::solve_wa(g, anneal.to_params(seed, time_limit), penalties.to_policy(),
                           anneal.retries);
    } else {
        const double penalty = wa::resolve_penalties(penalties.to_policy(), g, 1).c1;
        sol = wa::solve_wa_binary_search(g, anneal.to_params(seed, time_limit), penalty,
                                         anneal.retries);
    }

    if (!trace_path.empty() && solver == wa::solver_tag::kSimcimProposed) {
        // one diagnostic anneal at the solved bound with traces enabled
        wa::AnnealParams params = anneal.to_params(seed, time_limit);
        params.collect_traces = true;
        if (params.n_iterations <= 0)
            params.n_iterations =
                wa::default_params((g.n_vertices() + 1) * std::max(1, sol.n_colors)).n_iterations;
        wa::PenaltyCoefficients c =
            wa::resolve_penalties(penalties.to_policy(), g, std::max(1, sol.n_colors));
        wa::QuboProblem q = wa::build_proposed_qubo(g, std::max(1, sol.n_colors), c);
        wa::AnnealResult res = wa::simcim_solve(wa::to_ising(q), params);
        std::ofstream out(trace_path);
        if (!out) throw std::runtime_error("cannot write " + trace_path);
        wa::write_trace_csv(res, out);
    }

    if (!output.empty()) wa::save_solution(sol, output, stable_output);
    std::printf("%s %d %s %.4f\n", sol.solver.c_str(), sol.n_colors,
                sol.feasible ? "feasible" : "infeasible", stable_output ? 0.0 : sol.wall_time_s);
    return sol.feasible ? 0 : 1;
}

int cmd_check(const std::string& graph_path, const std::string& solution_path) {
    wa::Graph g = load_graph_any(graph_path);
    wa::ColoringSolution sol = wa::load_solution(solution_path);
    const int n = g.n_vertices();
    if (static_cast<int>(sol.colors.size()) != n) {
        std::cerr << "check: solution covers " << sol.colors.size() << " vertices, graph has " << n
                  << "\n";
        return 1;
    }
    int distinct = 0;
    std::vector<int> seen;
    bool ok = true;
    for (int v = 0; v < n; ++v) {
        const int c = sol.colors[v];
        if (c < 0) {
            std::cerr << "check: vertex " << v << " has no color\n";
            ok = false;
            continue;
        }
        if (std::find(seen.begin(), seen.end(), c) == seen.end()) {
            seen.push_back(c);
            ++distinct;
        }
    }
    for (const auto& [u, v] : g.edges()) {
        if (sol.colors[u] >= 0 && sol.colors[u] == sol.colors[v]) {
            std::cerr << "check: conflict on edge (" << u << ", " << v << "), both color "
                      << sol.colors[u] << "\n";
            ok = false;
        }
    }
    if (distinct != sol.n_colors) {
        std::cerr << "check: n_colors says " << sol.n_colors << " but " << distinct
                  << " distinct colors are used\n";
        ok = false;
    }
    if (ok) std::cout << "ok: " << sol.n_colors << " colors\n";
    return ok ? 0 : 1;
}

int cmd_qubo(const std::string& input, const std::string& encoding, const std::string& colors_arg,
             const std::string& output, const PenaltyFlags& penalties, bool paper_literal) {
    wa::Graph g = load_graph_any(input);
    int W;
    if (colors_arg == "from-ldf") {
        W = wa::ldf_coloring(g).n_colors;
    } else {
        W = std::stoi(colors_arg);
    }
    if (W < 1) throw CLI::ValidationError("--W", "color bound must be >= 1");

    wa::QuboProblem q = [&] {
        if (encoding == "original") {
            const double penalty = wa::resolve_penalties(penalties.to_policy(), g, W).c1;
            return wa::build_original_qubo(g, W, penalty);
        }
        wa::PenaltyCoefficients c = wa::resolve_penalties(penalties.to_policy(), g, W);
        return wa::build_proposed_qubo(g, W, c, paper_literal);
    }();
    wa::save_qubo(q, output);
    const auto& c = q.penalties();
    std::printf("K=%d W=%d c0=%g c1=%g c2=%g -> %s\n", q.dimension(), W, c.c0, c.c1, c.c2,
                output.c_str());
    return 0;
}

int cmd_bench(const std::string& dataset_dir, const std::string& solvers_arg, int max_n,
              double time_limit, std::uint64_t seed, int jobs, const AnnealFlags& anneal,
              bool stable_output, const std::string& output_dir) {
    const fs::path manifest_path = fs::path(dataset_dir) / "manifest.json";
    if (!fs::exists(manifest_path)) {
        std::cerr << "bench: no manifest.json under " << dataset_dir << "\n";
        return 1;
    }
    wa::Manifest manifest = wa::load_manifest(manifest_path.string());

    std::vector<std::string> solvers;
    std::stringstream ss(solvers_arg);
    std::string item;
    while (std::getline(ss, item, ',')) solvers.push_back(canonical_solver(item));
    if (solvers.empty()) {
        std::cerr << "bench: no solvers selected\n";
        return 1;
    }

    wa::BenchOptions opt;
    opt.time_limit_s = time_limit;
    opt.seed = seed;
    opt.jobs = jobs;
    opt.max_n = max_n;
    opt.stable_output = stable_output;
    opt.anneal_attempts = anneal.attempts;
    opt.anneal_threads = anneal.threads;
    opt.retries_per_level = anneal.retries;

    fs::create_directories(output_dir);
    const std::string records_path = (fs::path(output_dir) / "records.csv").string();
    std::vector<wa::BenchRecord> records =
        wa::run_benchmark(manifest, solvers, opt, records_path);

    std::ofstream csv((fs::path(output_dir) / "report.csv").string());
    std::ofstream md((fs::path(output_dir) / "report.md").string());
    wa::write_report(records, csv, md);
    std::cout << "wrote " << records.size() << " records to " << records_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelength assignment via graph coloring: QUBO encodings, "
                 "quantum-inspired annealing, exact oracles and benchmarks"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate random instances (DIMACS)");
    std::string gen_dataset;
    int gen_n = 10;
    double gen_p = 0.5;
    std::uint64_t gen_seed = wa::kDefaultDatasetSeed;
    int gen_max_n = 100, gen_instances = 0;
    std::string gen_output = default_output_dir();
    gen->add_option("--dataset", gen_dataset, "named dataset grid ('default': 900 instances)");
    gen->add_option("--n", gen_n, "vertex count");
    gen->add_option("--p", gen_p, "edge probability");
    gen->add_option("--seed", gen_seed, "generator seed / dataset base seed");
    gen->add_option("--max-n", gen_max_n, "dataset mode: drop node counts above this");
    gen->add_option("--instances", gen_instances, "dataset mode: instances per cell");
    gen->add_option("-o,--output", gen_output, "output file (or directory in dataset mode)");

    // solve
    auto* solve = app.add_subcommand("solve", "color a graph or path instance");
    std::string solve_input, solve_solver = "simcim", solve_output, solve_trace;
    std::uint64_t solve_seed = 0;
    double solve_time_limit = 300.0;
    bool solve_stable = false;
    AnnealFlags solve_anneal;
    PenaltyFlags solve_penalties;
    solve->add_option("input", solve_input, "DIMACS graph or path-instance JSON")->required();
    solve->add_option("--solver", solve_solver, "ldf|simcim|simcim-bs|exact");
    solve->add_option("-o,--output", solve_output, "solution JSON path");
    solve->add_option("--seed", solve_seed, "solver seed");
    solve->add_option("--time-limit", solve_time_limit, "wall-clock budget in seconds");
    solve->add_flag("--stable-output", solve_stable, "zero timing fields in outputs");
    solve->add_option("--trace", solve_trace, "dump per-iteration annealer trace CSV");
    solve_anneal.add_to(solve);
    solve_penalties.add_to(solve);

    // check
    auto* check = app.add_subcommand("check", "validate a solution against a graph");
    std::string check_graph, check_solution;
    check->add_option("--graph", check_graph, "DIMACS graph or path-instance JSON")->required();
    check->add_option("--solution", check_solution, "solution JSON")->required();

    // qubo
    auto* qubo = app.add_subcommand("qubo", "export a coloring QUBO");
    std::string qubo_input, qubo_encoding = "proposed", qubo_W = "from-ldf", qubo_output;
    bool qubo_literal = false;
    PenaltyFlags qubo_penalties;
    qubo->add_option("input", qubo_input, "DIMACS graph or path-instance JSON")->required();
    qubo->add_option("--encoding", qubo_encoding, "proposed|original")
        ->check(CLI::IsMember({"proposed", "original"}));
    qubo->add_option("--W", qubo_W, "color bound (integer or 'from-ldf')");
    qubo->add_option("-o,--output", qubo_output, "QUBO text file")->required();
    qubo->add_flag("--paper-literal", qubo_literal,
                   "emit the uncorrected historical block form (diagnostics)");
    qubo_penalties.add_to(qubo);

    // bench
    auto* bench = app.add_subcommand("bench", "run solvers over a generated dataset");
    std::string bench_dataset, bench_solvers = "ldf,simcim", bench_output = default_output_dir();
    int bench_max_n = 100, bench_jobs = 1;
    double bench_time_limit = 300.0;
    std::uint64_t bench_seed = 0;
    bool bench_stable = false;
    AnnealFlags bench_anneal;
    bench->add_option("--dataset", bench_dataset, "directory with manifest.json")->required();
    bench->add_option("--solvers", bench_solvers, "comma list: ldf,simcim,simcim-bs,exact");
    bench->add_option("--max-n", bench_max_n, "skip instances above this node count");
    bench->add_option("--time-limit", bench_time_limit, "per-instance budget in seconds");
    bench->add_option("--seed", bench_seed, "benchmark seed");
    bench->add_option("--jobs", bench_jobs, "instance-level parallelism");
    bench->add_flag("--stable-output", bench_stable, "zero timing fields in outputs");
    bench->add_option("-o,--output", bench_output, "output directory");
    bench_anneal.add_to(bench);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(gen_dataset, gen_n, gen_p, gen_seed, gen_max_n, gen_instances,
                           gen_output);
        if (solve->parsed())
            return cmd_solve(solve_input, solve_solver, solve_output, solve_seed, solve_time_limit,
                             solve_anneal, solve_penalties, solve_stable, solve_trace);
        if (check->parsed()) return cmd_check(check_graph, check_solution);
        if (qubo->parsed())
            return cmd_qubo(qubo_input, qubo_encoding, qubo_W, qubo_output, qubo_penalties,
                            qubo_literal);
        if (bench->parsed())
            return cmd_bench(bench_dataset, bench_solvers, bench_max_n, bench_time_limit,
                             bench_seed, bench_jobs, bench_anneal, bench_stable, bench_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
