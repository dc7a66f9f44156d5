#include "doctest.h"

#include <random>
#include <stdexcept>

#include "wa/exact.hpp"
#include "wa/graph.hpp"
#include "wa/qubo.hpp"
#include "wa/solver.hpp"

using namespace wa;

namespace {

Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

Graph petersen() {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 5; ++i) {
        edges.emplace_back(i, (i + 1) % 5);      // outer cycle
        edges.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
        edges.emplace_back(i, 5 + i);            // spokes
    }
    return Graph(10, std::move(edges));
}

bool proper(const Graph& g, const std::vector<int>& colors) {
    for (const auto& [u, v] : g.edges())
        if (colors[u] == colors[v]) return false;
    return true;
}

// Independent oracle: smallest k admitting any assignment from {0..k-1},
// by plain exhaustive enumeration over vertices in id order.
bool colorable_with(const Graph& g, int k, int v, std::vector<int>& colors) {
    if (v == g.n_vertices()) return true;
    for (int c = 0; c < k; ++c) {
        bool ok = true;
        for (int u = 0; u < v && ok; ++u)
            if (g.adjacent(u, v) && colors[u] == c) ok = false;
        if (!ok) continue;
        colors[v] = c;
        if (colorable_with(g, k, v + 1, colors)) return true;
    }
    colors[v] = -1;
    return false;
}

int brute_force_chromatic(const Graph& g) {
    if (g.n_vertices() == 0) return 0;
    for (int k = 1; k <= g.n_vertices(); ++k) {
        std::vector<int> colors(g.n_vertices(), -1);
        if (colorable_with(g, k, 0, colors)) return k;
    }
    return g.n_vertices();
}

}  // namespace

TEST_CASE("chromatic number of cliques") {
    for (int n = 1; n <= 6; ++n) {
        ExactColoringResult r = chromatic_number(complete_graph(n));
        CHECK(r.chromatic_number == n);
        CHECK_FALSE(r.timed_out);
    }
}

TEST_CASE("bipartite graphs take two colors") {
    // even cycle
    std::vector<std::pair<int, int>> cycle;
    for (int i = 0; i < 8; ++i) cycle.emplace_back(i, (i + 1) % 8);
    CHECK(chromatic_number(Graph(8, cycle)).chromatic_number == 2);
    // star
    CHECK(chromatic_number(Graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})).chromatic_number == 2);
    // edgeless
    CHECK(chromatic_number(Graph(4, {})).chromatic_number == 1);
}

TEST_CASE("petersen graph is 3-chromatic") {
    CHECK(chromatic_number(petersen()).chromatic_number == 3);
}

TEST_CASE("matches exhaustive assignment enumeration on random graphs") {
    for (int seed = 0; seed < 100; ++seed) {
        const double p = 0.2 + 0.6 * (seed % 5) / 4.0;
        Graph g = erdos_renyi(8, p, 3000 + seed);
        ExactColoringResult r = chromatic_number(g);
        CHECK(r.chromatic_number == brute_force_chromatic(g));
        CHECK(proper(g, r.witness));
        int used = *std::max_element(r.witness.begin(), r.witness.end()) + 1;
        CHECK(used == r.chromatic_number);  // witness re-evaluates to the optimum
    }
}

TEST_CASE("budget exhaustion yields bounds and a valid witness") {
    // dense 40-vertex instance cannot be proven optimal in ~a microsecond
    Graph g = erdos_renyi(40, 0.5, 42);
    ExactColoringResult r = chromatic_number(g, 1e-6);
    CHECK(r.timed_out);
    CHECK(r.lower_bound <= r.upper_bound);
    CHECK(proper(g, r.witness));
    int used = *std::max_element(r.witness.begin(), r.witness.end()) + 1;
    CHECK(used == r.upper_bound);
}

TEST_CASE("exhaustive qubo minimization") {
    SUBCASE("zero matrix returns the offset") {
        QuboProblem q(4, QuboLayout{Encoding::Raw, 0, 0}, PenaltyCoefficients{}, 5.0);
        ExhaustiveMinResult r = exhaustive_qubo_min(q);
        CHECK(r.minimum == 5.0);
        CHECK(r.states_visited == 16);
    }
    SUBCASE("proposed K2 optimum is a proper two-coloring") {
        Graph g(2, {{0, 1}});
        PenaltyCoefficients c = certified_penalties(2, 1);
        QuboProblem q = build_proposed_qubo(g, 2, c);
        ExhaustiveMinResult r = exhaustive_qubo_min(q);
        CHECK(r.minimum == 2.0 * c.c0);
        DecodedSolution d = decode(g, q.layout(), r.witness);
        CHECK(d.candidate.feasible);
        CHECK(d.candidate.n_colors == 2);
        CHECK(q.energy(r.witness) == r.minimum);  // witness re-evaluates
    }
    SUBCASE("decision form reaches zero exactly at the chromatic number") {
        for (int seed = 0; seed < 5; ++seed) {
            Graph g = erdos_renyi(6, 0.4, 600 + seed);
            int chi = chromatic_number(g).chromatic_number;
            CHECK(exhaustive_qubo_min(build_original_qubo(g, chi, 2.0)).minimum == 0.0);
        }
    }
    SUBCASE("gray-code evaluation agrees with direct evaluation") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> val(-3.0, 3.0);
        for (int trial = 0; trial < 10; ++trial) {
            const int K = 4 + static_cast<int>(rng() % 9);
            QuboProblem q(K, QuboLayout{Encoding::Raw, 0, 0}, PenaltyCoefficients{}, val(rng));
            for (int i = 0; i < K; ++i)
                for (int j = i; j < K; ++j) q.set(i, j, val(rng));
            ExhaustiveMinResult fast = exhaustive_qubo_min(q);

            double naive_min = std::numeric_limits<double>::infinity();
            std::vector<int> s(K);
            for (std::uint32_t bits = 0; bits < (1u << K); ++bits) {
                for (int i = 0; i < K; ++i) s[i] = (bits >> i) & 1;
                naive_min = std::min(naive_min, q.energy(s));
            }
            CHECK(fast.minimum == doctest::Approx(naive_min).epsilon(1e-12));
            CHECK(q.energy(fast.witness) == doctest::Approx(fast.minimum).epsilon(1e-12));
        }
    }
    SUBCASE("dimension cap is enforced") {
        QuboProblem q(kExhaustiveDimensionCap + 1, QuboLayout{Encoding::Raw, 0, 0},
                      PenaltyCoefficients{}, 0.0);
        CHECK_THROWS_WITH_AS(exhaustive_qubo_min(q),
                             doctest::Contains("exceeds the hard cap"), std::invalid_argument);
    }
}
