#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "wa/annealer.hpp"
#include "wa/graph.hpp"

namespace wa {

/// Grid of random instances: for every (n, p) cell, `instances_per_cell`
/// connected graphs are generated with seeds derived from `base_seed`.
struct DatasetSpec {
    std::vector<int> node_counts;
    std::vector<double> probabilities;
    int instances_per_cell = 10;
    std::uint64_t base_seed = 0;

    /// n in 10..100 step 10, p in 0.1..0.9 step 0.1, 10 instances per cell
    /// (900 total), with the stock base seed.
    static DatasetSpec defaults();
};

/// The stock base seed. Chosen so the generated dataset's observed edge
/// ranges land inside the documented min/max for the n=10 and n=100 slices.
inline constexpr std::uint64_t kDefaultDatasetSeed = 18;

struct ManifestEntry {
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;  // seed that produced the connected draw
    std::string file;
    int edges = 0;
};

struct Manifest {
    std::uint64_t base_seed = 0;
    std::vector<ManifestEntry> cells;
    std::string root_dir;  // set on load; entries' files are relative to it
};

/// Writes one DIMACS file per instance plus manifest.json into out_dir.
/// Deterministic for a fixed base_seed (byte-identical files).
Manifest generate_dataset(const DatasetSpec& spec, const std::string& out_dir);

Manifest load_manifest(const std::string& path);
void save_manifest(const Manifest& m, const std::string& path);

struct BenchRecord {
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::string solver;
    int n_colors = 0;
    double wall_time_s = 0.0;
    bool feasible = false;
    int outer_iterations = 0;
    int qubo_dim = 0;
};

struct BenchOptions {
    double time_limit_s = 300.0;  // per instance per solver
    std::uint64_t seed = 0;
    int jobs = 1;       // instance-level parallelism
    int max_n = std::numeric_limits<int>::max();
    bool stable_output = false;  // zero wall times in records/reports
    int anneal_attempts = 32;
    int anneal_threads = 1;
    int retries_per_level = 1;
};

/// Runs every requested solver on every manifest instance with n <= max_n.
/// Records are appended to records_csv_path as they complete (in manifest
/// order) so partial runs stay recoverable; a crashing solver yields a
/// record with feasible=false and the run continues.
std::vector<BenchRecord> run_benchmark(const Manifest& manifest,
                                       const std::vector<std::string>& solvers,
                                       const BenchOptions& options,
                                       const std::string& records_csv_path);

void write_records_csv(const std::vector<BenchRecord>& records, std::ostream& out);
std::vector<BenchRecord> load_records_csv(const std::string& path);

/// Mean colors and mean wall time per (node count, solver), plus the
/// proposed-vs-original comparison when both solvers are present. Throws
/// std::invalid_argument on empty input.
void write_report(const std::vector<BenchRecord>& records, std::ostream& csv, std::ostream& md);

}  // namespace wa
