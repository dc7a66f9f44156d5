#include "wa/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "wa/exact.hpp"
#include "wa/solver.hpp"

namespace fs = std::filesystem;

namespace wa {

DatasetSpec DatasetSpec::defaults() {
    DatasetSpec spec;
    for (int n = 10; n <= 100; n += 10) spec.node_counts.push_back(n);
    for (int pi = 1; pi <= 9; ++pi) spec.probabilities.push_back(pi / 10.0);
    spec.instances_per_cell = 10;
    spec.base_seed = kDefaultDatasetSeed;
    return spec;
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t cell_seed(std::uint64_t base, int n, int p_index, int instance) {
    std::uint64_t s = mix64(base ^ static_cast<std::uint64_t>(n));
    s = mix64(s ^ static_cast<std::uint64_t>(p_index + 1));
    return mix64(s ^ static_cast<std::uint64_t>(instance + 1));
}

std::string format_p(double p) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", p);
    return buf;
}

}  // namespace

Manifest generate_dataset(const DatasetSpec& spec, const std::string& out_dir) {
    if (spec.instances_per_cell < 1)
        throw std::invalid_argument("generate_dataset: instances_per_cell must be >= 1");
    fs::create_directories(out_dir);

    Manifest manifest;
    manifest.base_seed = spec.base_seed;
    manifest.root_dir = out_dir;
    for (int n : spec.node_counts) {
        for (std::size_t pi = 0; pi < spec.probabilities.size(); ++pi) {
            const double p = spec.probabilities[pi];
            for (int inst = 0; inst < spec.instances_per_cell; ++inst) {
                std::uint64_t requested = cell_seed(spec.base_seed, n, static_cast<int>(pi), inst);
                std::uint64_t used = requested;
                Graph g = erdos_renyi(n, p, requested, &used);

                std::ostringstream name;
                name << "er_n" << n << "_p" << format_p(p) << "_i" << inst << ".col";
                save_dimacs(g, (fs::path(out_dir) / name.str()).string());

                ManifestEntry entry;
                entry.n = n;
                entry.p = p;
                entry.seed = used;
                entry.file = name.str();
                entry.edges = g.n_edges();
                manifest.cells.push_back(std::move(entry));
            }
        }
    }
    save_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());
    return manifest;
}

void save_manifest(const Manifest& m, const std::string& path) {
    nlohmann::json j;
    j["base_seed"] = m.base_seed;
    auto cells = nlohmann::json::array();
    for (const auto& e : m.cells)
        cells.push_back({{"n", e.n}, {"p", e.p}, {"seed", e.seed}, {"file", e.file},
                         {"edges", e.edges}});
    j["cells"] = std::move(cells);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    Manifest m;
    m.base_seed = j.at("base_seed").get<std::uint64_t>();
    m.root_dir = fs::path(path).parent_path().string();
    for (const auto& c : j.at("cells")) {
        ManifestEntry e;
        e.n = c.at("n").get<int>();
        e.p = c.at("p").get<double>();
        e.seed = c.at("seed").get<std::uint64_t>();
        e.file = c.at("file").get<std::string>();
        e.edges = c.at("edges").get<int>();
        m.cells.push_back(std::move(e));
    }
    return m;
}

namespace {

BenchRecord run_one(const ManifestEntry& entry, const Graph& g, const std::string& solver,
                    const BenchOptions& opt) {
    BenchRecord rec;
    rec.n = entry.n;
    rec.p = entry.p;
    rec.seed = entry.seed;
    rec.solver = solver;

    AnnealParams anneal;
    anneal.n_iterations = 0;  // scale with each probe
    anneal.n_attempts = opt.anneal_attempts;
    anneal.n_threads = opt.anneal_threads;
    anneal.seed = opt.seed ^ entry.seed;
    anneal.time_limit_s = opt.time_limit_s;

    try {
        if (solver == solver_tag::kLdf) {
            ColoringSolution s = ldf_coloring(g);
            rec.n_colors = s.n_colors;
            rec.feasible = s.feasible;
            rec.wall_time_s = s.wall_time_s;
        } else if (solver == solver_tag::kSimcimProposed) {
            ColoringSolution s = solve_wa(g, anneal, PenaltyPolicy::heuristic(entry.p),
                                          opt.retries_per_level);
            rec.n_colors = s.n_colors;
            rec.feasible = s.feasible;
            rec.wall_time_s = s.wall_time_s;
            rec.outer_iterations = s.outer_iterations;
            rec.qubo_dim = s.max_qubo_dim;
        } else if (solver == solver_tag::kSimcimBinarySearch) {
            const double penalty = heuristic_penalties(g.n_vertices(), entry.p).c1;
            ColoringSolution s = solve_wa_binary_search(g, anneal, penalty, opt.retries_per_level);
            rec.n_colors = s.n_colors;
            rec.feasible = s.feasible;
            rec.wall_time_s = s.wall_time_s;
            rec.outer_iterations = s.outer_iterations;
            rec.qubo_dim = s.max_qubo_dim;
        } else if (solver == solver_tag::kExact) {
            ExactColoringResult r = chromatic_number(g, opt.time_limit_s);
            rec.n_colors = r.timed_out ? r.upper_bound : r.chromatic_number;
            rec.feasible = !r.timed_out;  // only proven optima count
            rec.wall_time_s = r.wall_time_s;
        } else {
            throw std::invalid_argument("unknown solver: " + solver);
        }
    } catch (const std::exception&) {
        rec.feasible = false;  // failure flag; the run continues
        rec.n_colors = 0;
    }
    if (opt.stable_output) rec.wall_time_s = 0.0;
    return rec;
}

void append_record(std::ostream& out, const BenchRecord& r) {
    char wt[32];
    std::snprintf(wt, sizeof wt, "%.6f", r.wall_time_s);
    out << r.n << ',' << format_p(r.p) << ',' << r.seed << ',' << r.solver << ',' << r.n_colors
        << ',' << wt << ',' << (r.feasible ? 1 : 0) << ',' << r.outer_iterations << ','
        << r.qubo_dim << '\n';
    out.flush();
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const Manifest& manifest,
                                       const std::vector<std::string>& solvers,
                                       const BenchOptions& options,
                                       const std::string& records_csv_path) {
    std::vector<const ManifestEntry*> entries;
    for (const auto& e : manifest.cells)
        if (e.n <= options.max_n) entries.push_back(&e);
    if (entries.empty()) throw std::invalid_argument("run_benchmark: no instances selected");

    struct Task {
        const ManifestEntry* entry;
        std::string solver;
    };
    std::vector<Task> tasks;
    for (const auto* e : entries)
        for (const auto& s : solvers) tasks.push_back({e, s});

    std::ofstream out(records_csv_path);
    if (!out) throw std::runtime_error("cannot write " + records_csv_path);
    out << "n,p,seed,solver,n_colors,wall_time_s,feasible,outer_iterations,qubo_dim\n";

    std::vector<BenchRecord> records(tasks.size());
    const int jobs = std::max(1, options.jobs);

    if (jobs == 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            Graph g = load_dimacs((fs::path(manifest.root_dir) / tasks[t].entry->file).string());
            records[t] = run_one(*tasks[t].entry, g, tasks[t].solver, options);
            append_record(out, records[t]);
        }
    } else {
        // parallel execution, ordered commit: records are written in task
        // order so reruns produce identical files
        std::mutex m;
        std::size_t next_task = 0;
        std::size_t next_write = 0;
        std::vector<std::uint8_t> done(tasks.size(), 0);
        auto worker = [&]() {
            while (true) {
                std::size_t t;
                {
                    std::lock_guard<std::mutex> lock(m);
                    if (next_task >= tasks.size()) return;
                    t = next_task++;
                }
                Graph g =
                    load_dimacs((fs::path(manifest.root_dir) / tasks[t].entry->file).string());
                BenchRecord rec = run_one(*tasks[t].entry, g, tasks[t].solver, options);
                {
                    std::lock_guard<std::mutex> lock(m);
                    records[t] = std::move(rec);
                    done[t] = 1;
                    while (next_write < tasks.size() && done[next_write]) {
                        append_record(out, records[next_write]);
                        ++next_write;
                    }
                }
            }
        };
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return records;
}

void write_records_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
    out << "n,p,seed,solver,n_colors,wall_time_s,feasible,outer_iterations,qubo_dim\n";
    for (const auto& r : records) append_record(out, r);
}

std::vector<BenchRecord> load_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<BenchRecord> records;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream iss(line);
        BenchRecord r;
        int feasible = 0;
        iss >> r.n >> r.p >> r.seed >> r.solver >> r.n_colors >> r.wall_time_s >> feasible >>
            r.outer_iterations >> r.qubo_dim;
        if (!iss) throw std::runtime_error("bad record line: " + line);
        r.feasible = feasible != 0;
        records.push_back(std::move(r));
    }
    return records;
}

namespace {

struct SliceStats {
    double color_sum = 0.0;
    double time_sum = 0.0;
    int count = 0;
};

}  // namespace

void write_report(const std::vector<BenchRecord>& records, std::ostream& csv, std::ostream& md) {
    if (records.empty()) throw std::invalid_argument("report: no records");

    std::map<std::string, std::map<int, SliceStats>> by_solver;
    std::vector<std::string> solver_order;
    std::vector<int> node_counts;
    for (const auto& r : records) {
        if (!r.feasible) continue;
        if (!by_solver.count(r.solver)) solver_order.push_back(r.solver);
        auto& slice = by_solver[r.solver][r.n];
        slice.color_sum += r.n_colors;
        slice.time_sum += r.wall_time_s;
        ++slice.count;
        if (std::find(node_counts.begin(), node_counts.end(), r.n) == node_counts.end())
            node_counts.push_back(r.n);
    }
    std::sort(node_counts.begin(), node_counts.end());
    std::sort(solver_order.begin(), solver_order.end());

    // wall_time_s is time-to-best-solution, not total loop time
    csv << "# mean colors / mean time-to-solution (s), grouped by node count\n";
    csv << "n";
    for (const auto& s : solver_order) csv << ',' << s << "_colors," << s << "_time_s";
    csv << '\n';
    for (int n : node_counts) {
        csv << n;
        for (const auto& s : solver_order) {
            const auto& m = by_solver[s];
            auto it = m.find(n);
            if (it == m.end() || it->second.count == 0) {
                csv << ",,";
            } else {
                char buf[64];
                std::snprintf(buf, sizeof buf, ",%.4f,%.4f", it->second.color_sum / it->second.count,
                              it->second.time_sum / it->second.count);
                csv << buf;
            }
        }
        csv << '\n';
    }

    md << "# Benchmark report\n\n";
    md << "Mean colors (time-to-solution in seconds), grouped by node count.\n";
    md << "Time-to-solution is the wall time until the best feasible solution was found.\n\n";
    md << "| n |";
    for (const auto& s : solver_order) md << ' ' << s << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < solver_order.size(); ++i) md << "---|";
    md << '\n';
    for (int n : node_counts) {
        md << "| " << n << " |";
        for (const auto& s : solver_order) {
            const auto& m = by_solver[s];
            auto it = m.find(n);
            if (it == m.end() || it->second.count == 0) {
                md << " - |";
            } else {
                char buf[64];
                std::snprintf(buf, sizeof buf, " %.2f (%.2f) |",
                              it->second.color_sum / it->second.count,
                              it->second.time_sum / it->second.count);
                md << buf;
            }
        }
        md << '\n';
    }

    // one-shot vs decision-search comparison when both solvers are present
    const std::string proposed = solver_tag::kSimcimProposed;
    const std::string original = solver_tag::kSimcimBinarySearch;
    if (by_solver.count(proposed) && by_solver.count(original)) {
        md << "\n## Encoding comparison (mean colors)\n\n";
        md << "| n | one-shot | decision search | delta |\n|---|---|---|---|\n";
        for (int n : node_counts) {
            auto pi = by_solver[proposed].find(n);
            auto oi = by_solver[original].find(n);
            if (pi == by_solver[proposed].end() || oi == by_solver[original].end()) continue;
            if (pi->second.count == 0 || oi->second.count == 0) continue;
            const double pm = pi->second.color_sum / pi->second.count;
            const double om = oi->second.color_sum / oi->second.count;
            char buf[96];
            std::snprintf(buf, sizeof buf, "| %d | %.2f | %.2f | %+.2f |\n", n, pm, om, pm - om);
            md << buf;
        }
    }
}

}  // namespace wa
