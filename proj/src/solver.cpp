#include "wa/solver.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace wa {

namespace {
using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}
}  // namespace

bool check_coloring(const Graph& g, std::span<const int> x, int max_colors) {
    const int n = g.n_vertices();
    const int W = max_colors;
    if (static_cast<int>(x.size()) != n * W)
        throw std::invalid_argument("check_coloring: dimension mismatch");
    for (int v = 0; v < n; ++v) {
        int assigned = 0;
        for (int i = 0; i < W; ++i) assigned += x[v * W + i];
        if (assigned != 1) return false;
    }
    for (const auto& [u, v] : g.edges())
        for (int i = 0; i < W; ++i)
            if (x[u * W + i] && x[v * W + i]) return false;
    return true;
}

DecodedSolution decode(const Graph& g, const QuboLayout& layout, std::span<const int> s) {
    const int n = layout.n_vertices;
    const int W = layout.max_colors;
    const bool has_w_block = layout.encoding == Encoding::Proposed;
    const int expected = (has_w_block ? (n + 1) : n) * W;
    if (layout.encoding == Encoding::Raw)
        throw std::invalid_argument("decode: raw layout carries no variable mapping");
    if (static_cast<int>(s.size()) != expected)
        throw std::invalid_argument("decode: dimension mismatch");

    DecodedSolution d;
    const int x_base = has_w_block ? W : 0;
    d.x.assign(s.begin() + x_base, s.end());

    // repair: usage indicators recomputed from the actual assignment
    d.w.assign(W, 0);
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < W; ++i)
            if (d.x[v * W + i]) d.w[i] = 1;

    // contiguous relabeling of the used colors, ascending
    std::vector<int> relabel(W, -1);
    int used = 0;
    for (int i = 0; i < W; ++i)
        if (d.w[i]) relabel[i] = used++;

    ColoringSolution& c = d.candidate;
    c.colors.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        int count = 0, color = -1;
        for (int i = 0; i < W; ++i) {
            if (d.x[v * W + i]) {
                ++count;
                color = relabel[i];
            }
        }
        if (count == 1) c.colors[v] = color;
    }
    c.n_colors = used;
    c.feasible = check_coloring(g, d.x, W);
    c.energy = used;  // used-color count at unit weight; callers rescale
    return d;
}

PenaltyCoefficients resolve_penalties(const PenaltyPolicy& policy, const Graph& g, int max_colors) {
    switch (policy.kind) {
        case PenaltyPolicy::Kind::Heuristic:
            if (policy.edge_probability) return heuristic_penalties(g.n_vertices(), *policy.edge_probability);
            return heuristic_penalties(g);
        case PenaltyPolicy::Kind::Certified:
            return certified_penalties(max_colors, g.n_edges());
        case PenaltyPolicy::Kind::Explicit:
            if (policy.explicit_coefficients.c0 <= 0.0 || policy.explicit_coefficients.c1 <= 0.0 ||
                policy.explicit_coefficients.c2 <= 0.0)
                throw std::invalid_argument("penalty policy: explicit coefficients must be positive");
            return policy.explicit_coefficients;
    }
    throw std::logic_error("penalty policy: unknown kind");
}

namespace {

std::vector<int> spins_to_binary(std::span<const int> spins) {
    std::vector<int> b(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) b[i] = spins[i] > 0 ? 1 : 0;
    return b;
}

// Remaining wall-clock budget for an inner solve; 0 disables the limit.
double remaining_budget(double total_limit, Clock::time_point t0) {
    if (total_limit <= 0.0) return 0.0;
    double left = total_limit - seconds_since(t0);
    return std::max(left, 1e-3);
}

}  // namespace

ColoringSolution solve_wa(const Graph& g, const AnnealParams& anneal,
                          const PenaltyPolicy& penalties, int retries_per_level) {
    const auto t0 = Clock::now();
    const int n = g.n_vertices();

    ColoringSolution best = ldf_coloring(g);
    best.wall_time_s = seconds_since(t0);
    if (n == 0 || g.n_edges() == 0) {
        // nothing for the annealer to improve
        best.wall_time_s = seconds_since(t0);
        return best;
    }

    int bound = best.n_colors;
    int outer = 0;
    int max_dim = 0;
    bool truncated = false;

    while (bound >= 1) {
        const PenaltyCoefficients coeff = resolve_penalties(penalties, g, bound);
        const QuboProblem qubo = build_proposed_qubo(g, bound, coeff);
        const IsingProblem ising = to_ising(qubo);
        const QuboLayout layout = qubo.layout();
        max_dim = std::max(max_dim, qubo.dimension());

        FeasibleFn is_feasible = [&](std::span<const int> spins) {
            return decode(g, layout, spins_to_binary(spins)).candidate.feasible;
        };

        bool found = false;
        DecodedSolution decoded;
        for (int attempt = 0; attempt < std::max(1, retries_per_level); ++attempt) {
            AnnealParams params = anneal;
            if (params.n_iterations <= 0)  // auto: scale with the probe size
                params.n_iterations = default_params(ising.dimension()).n_iterations;
            params.seed = anneal.seed + 0x9E37ull * static_cast<std::uint64_t>(outer + attempt);
            params.time_limit_s = remaining_budget(anneal.time_limit_s, t0);
            ++outer;

            AnnealResult res = simcim_solve(ising, params, is_feasible);
            truncated = truncated || res.truncated;
            if (res.has_feasible) {
                decoded = decode(g, layout, spins_to_binary(res.best_feasible_spins));
                found = decoded.candidate.feasible;
                if (found) break;
            }
            if (anneal.time_limit_s > 0.0 && seconds_since(t0) >= anneal.time_limit_s) {
                truncated = true;
                break;
            }
        }
        if (!found) break;

        ColoringSolution sol = decoded.candidate;
        sol.solver = solver_tag::kSimcimProposed;
        sol.energy = coeff.c0 * sol.n_colors;
        sol.wall_time_s = seconds_since(t0);
        if (sol.n_colors <= best.n_colors) best = sol;

        bound = sol.n_colors - 1;  // strictly decreasing
        if (truncated) break;
    }

    best.outer_iterations = outer;
    best.truncated = truncated;
    best.max_qubo_dim = max_dim;
    return best;
}

ColoringSolution solve_wa_binary_search(const Graph& g, const AnnealParams& anneal, double penalty,
                                        int retries_per_level) {
    const auto t0 = Clock::now();

    ColoringSolution best = ldf_coloring(g);
    best.wall_time_s = seconds_since(t0);
    if (g.n_vertices() == 0 || g.n_edges() == 0) return best;

    int lo = 1, hi = best.n_colors - 1;
    int probes = 0;
    int max_dim = 0;
    bool truncated = false;

    while (lo <= hi) {
        const int mid = lo + (hi - lo) / 2;
        const QuboProblem qubo = build_original_qubo(g, mid, penalty);
        const IsingProblem ising = to_ising(qubo);
        const QuboLayout layout = qubo.layout();
        max_dim = std::max(max_dim, qubo.dimension());

        FeasibleFn is_feasible = [&](std::span<const int> spins) {
            return decode(g, layout, spins_to_binary(spins)).candidate.feasible;
        };

        bool found = false;
        DecodedSolution decoded;
        for (int attempt = 0; attempt < std::max(1, retries_per_level); ++attempt) {
            AnnealParams params = anneal;
            if (params.n_iterations <= 0)
                params.n_iterations = default_params(ising.dimension()).n_iterations;
            params.seed = anneal.seed + 0x9E37ull * static_cast<std::uint64_t>(probes + attempt);
            params.time_limit_s = remaining_budget(anneal.time_limit_s, t0);
            ++probes;

            AnnealResult res = simcim_solve(ising, params, is_feasible);
            truncated = truncated || res.truncated;
            if (res.has_feasible) {
                decoded = decode(g, layout, spins_to_binary(res.best_feasible_spins));
                found = decoded.candidate.feasible;
                if (found) break;
            }
            if (anneal.time_limit_s > 0.0 && seconds_since(t0) >= anneal.time_limit_s) {
                truncated = true;
                break;
            }
        }

        if (found) {
            ColoringSolution sol = decoded.candidate;
            sol.solver = solver_tag::kSimcimBinarySearch;
            sol.energy = 0.0;  // satisfied decision instance
            sol.wall_time_s = seconds_since(t0);
            if (sol.n_colors < best.n_colors) best = sol;
            hi = sol.n_colors - 1;
        } else {
            lo = mid + 1;
        }
        if (truncated) break;
    }

    best.outer_iterations = probes;
    best.truncated = truncated;
    best.max_qubo_dim = max_dim;
    return best;
}

// --- JSON ---

void write_solution(const ColoringSolution& s, std::ostream& out, bool zero_times) {
    nlohmann::json j;
    j["solver"] = s.solver;
    j["n_colors"] = s.n_colors;
    j["colors"] = s.colors;
    j["feasible"] = s.feasible;
    j["energy"] = s.energy;
    j["wall_time_s"] = zero_times ? 0.0 : s.wall_time_s;
    j["outer_iterations"] = s.outer_iterations;
    out << j.dump(2) << '\n';
}

ColoringSolution read_solution(std::istream& in) {
    nlohmann::json j;
    in >> j;
    ColoringSolution s;
    s.solver = j.at("solver").get<std::string>();
    s.n_colors = j.at("n_colors").get<int>();
    s.colors = j.at("colors").get<std::vector<int>>();
    s.feasible = j.at("feasible").get<bool>();
    s.energy = j.at("energy").get<double>();
    s.wall_time_s = j.at("wall_time_s").get<double>();
    s.outer_iterations = j.at("outer_iterations").get<int>();
    return s;
}

void save_solution(const ColoringSolution& s, const std::string& path, bool zero_times) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_solution(s, out, zero_times);
}

ColoringSolution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_solution(in);
}

}  // namespace wa
