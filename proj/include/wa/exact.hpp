#pragma once

#include <vector>

#include "wa/graph.hpp"
#include "wa/qubo.hpp"

namespace wa {

/// Result of the exact coloring search. When `timed_out` is false,
/// `chromatic_number` is proven optimal and `witness` is an optimal proper
/// coloring; otherwise only the bounds hold and `witness` realizes
/// `upper_bound`.
struct ExactColoringResult {
    int chromatic_number = 0;
    std::vector<int> witness;
    long long nodes_explored = 0;
    double wall_time_s = 0.0;
    bool timed_out = false;
    int lower_bound = 0;
    int upper_bound = 0;
};

/// Exact minimum color count by saturation-ordered backtracking with a
/// greedy clique lower bound and a DSATUR upper bound. budget_s = 0 means
/// no time limit.
ExactColoringResult chromatic_number(const Graph& g, double budget_s = 0.0);

struct ExhaustiveMinResult {
    double minimum = 0.0;
    std::vector<int> witness;
    long long states_visited = 0;
    double wall_time_s = 0.0;
};

inline constexpr int kExhaustiveDimensionCap = 26;

/// Global minimum of s^T Q s + offset over all 2^K binary vectors using
/// Gray-code incremental evaluation (O(2^K * K) total). Throws
/// std::invalid_argument when K exceeds kExhaustiveDimensionCap.
ExhaustiveMinResult exhaustive_qubo_min(const QuboProblem& q);

}  // namespace wa
