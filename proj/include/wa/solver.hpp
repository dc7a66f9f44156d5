#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wa/annealer.hpp"
#include "wa/coloring.hpp"
#include "wa/graph.hpp"
#include "wa/qubo.hpp"

namespace wa {

/// True iff every vertex has exactly one color set and no edge joins two
/// vertices sharing a color. `x` is n_vertices x W, vertex-major.
bool check_coloring(const Graph& g, std::span<const int> x, int max_colors);

/// Split of a binary solver output back into model variables. `w` holds the
/// repaired usage indicators (w_i = max_v x_vi); `candidate` carries the
/// relabeled coloring with feasibility decided by check_coloring on x alone.
struct DecodedSolution {
    std::vector<int> w;
    std::vector<int> x;
    ColoringSolution candidate;
};

DecodedSolution decode(const Graph& g, const QuboLayout& layout, std::span<const int> s);

/// How penalty coefficients are chosen when a solve builds its QUBOs.
struct PenaltyPolicy {
    enum class Kind { Heuristic, Certified, Explicit };
    Kind kind = Kind::Heuristic;
    std::optional<double> edge_probability;  // heuristic: generator p when known
    PenaltyCoefficients explicit_coefficients;

    static PenaltyPolicy heuristic(std::optional<double> p = std::nullopt) {
        return {Kind::Heuristic, p, {}};
    }
    static PenaltyPolicy certified() { return {Kind::Certified, std::nullopt, {}}; }
    static PenaltyPolicy explicit_values(PenaltyCoefficients c) {
        return {Kind::Explicit, std::nullopt, c};
    }
};

PenaltyCoefficients resolve_penalties(const PenaltyPolicy& policy, const Graph& g, int max_colors);

/// Color minimization with the one-shot encoding: starts from the LDF upper
/// bound, anneals the color-minimizing QUBO, and while the decoded coloring
/// is proper lowers the bound to (used colors - 1) and repeats. Falls back
/// to the LDF solution when the first probe already fails, so the result is
/// never worse than LDF.
ColoringSolution solve_wa(const Graph& g, const AnnealParams& anneal, const PenaltyPolicy& penalties,
                          int retries_per_level = 1);

/// Baseline: binary search over W with the decision encoding, asking the
/// annealer for a zero-violation state at each probe.
ColoringSolution solve_wa_binary_search(const Graph& g, const AnnealParams& anneal, double penalty,
                                        int retries_per_level = 1);

// --- solution JSON: {solver, n_colors, colors, feasible, energy,
// wall_time_s, outer_iterations} ---

void write_solution(const ColoringSolution& s, std::ostream& out, bool zero_times = false);
ColoringSolution read_solution(std::istream& in);
void save_solution(const ColoringSolution& s, const std::string& path, bool zero_times = false);
ColoringSolution load_solution(const std::string& path);

}  // namespace wa
