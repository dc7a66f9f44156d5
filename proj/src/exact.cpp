#include "wa/exact.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <stdexcept>
#include <string>

namespace wa {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<int> dsatur_greedy(const Graph& g) {
    const int n = g.n_vertices();
    std::vector<int> colors(n, -1);
    std::vector<int> sat_count(n, 0);
    std::vector<std::vector<std::uint8_t>> sat_colors(n, std::vector<std::uint8_t>(n + 1, 0));
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (colors[v] >= 0) continue;
            if (best < 0 || sat_count[v] > sat_count[best] ||
                (sat_count[v] == sat_count[best] && g.degree(v) > g.degree(best)))
                best = v;
        }
        std::vector<std::uint8_t> used(n + 1, 0);
        for (int u = 0; u < n; ++u)
            if (g.adjacent(best, u) && colors[u] >= 0) used[colors[u]] = 1;
        int c = 0;
        while (used[c]) ++c;
        colors[best] = c;
        for (int u = 0; u < n; ++u) {
            if (!g.adjacent(best, u) || colors[u] >= 0) continue;
            if (!sat_colors[u][c]) {
                sat_colors[u][c] = 1;
                ++sat_count[u];
            }
        }
    }
    return colors;
}

int greedy_clique_size(const Graph& g) {
    const int n = g.n_vertices();
    if (n == 0) return 0;
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return a < b;
    });
    int best = 1;
    // grow a clique greedily from each of the highest-degree seeds
    for (int t = 0; t < std::min(n, 8); ++t) {
        std::vector<int> clique{order[t]};
        for (int v : order) {
            if (v == order[t]) continue;
            bool ok = std::all_of(clique.begin(), clique.end(),
                                  [&](int u) { return g.adjacent(u, v); });
            if (ok) clique.push_back(v);
        }
        best = std::max(best, static_cast<int>(clique.size()));
    }
    return best;
}

struct ChromaticSearch {
    const Graph& g;
    int n;
    int palette;  // colors are always < the initial upper bound
    std::vector<std::vector<int>> nbrs;
    int best_k;
    std::vector<int> best_colors;
    std::vector<int> colors;
    std::vector<int> nbr_color_count;  // (v, c) -> colored neighbors of v with color c
    std::vector<int> saturation;       // distinct colors among colored neighbors
    long long nodes = 0;
    bool timed_out = false;
    Clock::time_point deadline;
    bool has_deadline;
    int clique_lb;

    ChromaticSearch(const Graph& graph, int ub, std::vector<int> ub_colors, int lb,
                    Clock::time_point dl, bool has_dl)
        : g(graph),
          n(graph.n_vertices()),
          palette(ub),
          nbrs(graph.n_vertices()),
          best_k(ub),
          best_colors(std::move(ub_colors)),
          colors(graph.n_vertices(), -1),
          nbr_color_count(static_cast<std::size_t>(graph.n_vertices()) * ub, 0),
          saturation(graph.n_vertices(), 0),
          deadline(dl),
          has_deadline(has_dl),
          clique_lb(lb) {
        for (const auto& [u, v] : graph.edges()) {
            nbrs[u].push_back(v);
            nbrs[v].push_back(u);
        }
    }

    bool out_of_time() {
        if (!has_deadline || timed_out) return timed_out;
        if ((nodes & 0xFFF) == 0 && Clock::now() > deadline) timed_out = true;
        return timed_out;
    }

    void assign(int v, int c) {
        colors[v] = c;
        for (int u : nbrs[v])
            if (colors[u] < 0 && nbr_color_count[static_cast<std::size_t>(u) * palette + c]++ == 0)
                ++saturation[u];
    }

    void unassign(int v, int c) {
        colors[v] = -1;
        for (int u : nbrs[v])
            if (colors[u] < 0 && --nbr_color_count[static_cast<std::size_t>(u) * palette + c] == 0)
                --saturation[u];
    }

    void run(int colored, int max_color_used) {
        ++nodes;
        if (out_of_time() || best_k == clique_lb) return;
        if (colored == n) {
            if (max_color_used + 1 < best_k) {
                best_k = max_color_used + 1;
                best_colors = colors;
            }
            return;
        }
        if (max_color_used + 1 >= best_k) return;

        // most saturated vertex next; ties by degree, then lowest id
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (colors[v] >= 0) continue;
            if (pick < 0 || saturation[v] > saturation[pick] ||
                (saturation[v] == saturation[pick] && g.degree(v) > g.degree(pick)))
                pick = v;
        }

        const int try_up_to = std::min(max_color_used + 1, best_k - 2);
        for (int c = 0; c <= try_up_to; ++c) {
            if (nbr_color_count[static_cast<std::size_t>(pick) * palette + c] > 0) continue;
            assign(pick, c);
            run(colored + 1, std::max(max_color_used, c));
            unassign(pick, c);
            if (timed_out || best_k == clique_lb) return;
        }
    }
};

}  // namespace

ExactColoringResult chromatic_number(const Graph& g, double budget_s) {
    const auto start = Clock::now();
    ExactColoringResult res;
    const int n = g.n_vertices();
    if (n == 0) {
        res.chromatic_number = 0;
        res.lower_bound = res.upper_bound = 0;
        return res;
    }

    std::vector<int> ub_colors = dsatur_greedy(g);
    int ub = *std::max_element(ub_colors.begin(), ub_colors.end()) + 1;
    int lb = g.n_edges() > 0 ? std::max(2, greedy_clique_size(g)) : 1;

    ChromaticSearch search(g, ub, std::move(ub_colors), lb,
                           start + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(budget_s)),
                           budget_s > 0.0);
    if (ub > lb) search.run(0, -1);

    res.chromatic_number = search.best_k;
    res.witness = search.best_colors;
    res.nodes_explored = search.nodes;
    res.timed_out = search.timed_out;
    res.lower_bound = search.timed_out ? lb : search.best_k;
    res.upper_bound = search.best_k;
    res.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return res;
}

ExhaustiveMinResult exhaustive_qubo_min(const QuboProblem& q) {
    const int K = q.dimension();
    if (K > kExhaustiveDimensionCap)
        throw std::invalid_argument("exhaustive_qubo_min: dimension " + std::to_string(K) +
                                    " exceeds the hard cap of " +
                                    std::to_string(kExhaustiveDimensionCap));
    const auto start = Clock::now();

    // dense mirror of Q for branch-free row access in the hot loop
    std::vector<double> m(static_cast<std::size_t>(K) * K);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) m[static_cast<std::size_t>(i) * K + j] = q.at(i, j);

    // Gray-code walk: states t and t+1 differ in bit countr_zero(t+1); the
    // energy delta of flipping bit b is (+-1) * (Q_bb + 2 * sum_{j!=b} Q_bj s_j)
    std::vector<int> s(K, 0);
    std::vector<double> field(K, 0.0);  // field[b] = sum_{j != b} Q_bj s_j
    double energy = q.offset();

    ExhaustiveMinResult res;
    res.minimum = energy;
    res.witness = s;
    const std::uint64_t total = 1ull << K;
    for (std::uint64_t t = 1; t < total; ++t) {
        const int b = std::countr_zero(t);
        const double d = s[b] ? -1.0 : 1.0;
        energy += d * (m[static_cast<std::size_t>(b) * K + b] + 2.0 * field[b]);
        s[b] = 1 - s[b];
        const double* row = &m[static_cast<std::size_t>(b) * K];
        for (int a = 0; a < K; ++a) field[a] += d * row[a];
        field[b] -= d * row[b];  // field excludes the diagonal
        if (energy < res.minimum) {
            res.minimum = energy;
            res.witness = s;
        }
    }
    res.states_visited = static_cast<long long>(total);
    res.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return res;
}

}  // namespace wa
