#pragma once

#include <string>
#include <vector>

namespace wa {

namespace solver_tag {
inline constexpr const char* kLdf = "ldf";
inline constexpr const char* kSimcimProposed = "simcim-proposed";
inline constexpr const char* kSimcimBinarySearch = "simcim-binary-search";
inline constexpr const char* kExact = "exact";
}  // namespace solver_tag

/// A (candidate) vertex coloring together with solver bookkeeping.
///
/// When `feasible` is true the coloring is proper, uses exactly `n_colors`
/// distinct colors and the color ids are the contiguous range [0, n_colors).
/// Infeasible candidates (e.g. decoded from a bad annealer snapshot) may
/// carry -1 for vertices without a well-defined color.
struct ColoringSolution {
    std::vector<int> colors;
    int n_colors = 0;
    bool feasible = false;
    double energy = 0.0;  // Hamiltonian value of the certifying assignment
    std::string solver;
    double wall_time_s = 0.0;  // time until this solution was found
    int outer_iterations = 0;
    bool truncated = false;   // a time budget cut the search short
    int max_qubo_dim = 0;     // largest QUBO built while solving (0 if none)
};

}  // namespace wa
