#include "doctest.h"

#include <chrono>
#include <random>
#include <sstream>

#include "wa/exact.hpp"
#include "wa/graph.hpp"
#include "wa/qubo.hpp"

using namespace wa;

namespace {

Graph k2() { return Graph(2, {{0, 1}}); }
Graph k3() { return Graph(3, {{0, 1}, {0, 2}, {1, 2}}); }

// Reference assembly: accumulate every Hamiltonian monomial one by one.
// Deliberately ignorant of the block structure used by the real builder.
QuboProblem reference_proposed(const Graph& g, int W, const PenaltyCoefficients& c) {
    const int n = g.n_vertices();
    QuboProblem q((n + 1) * W, QuboLayout{Encoding::Proposed, W, n}, c, c.c1 * n);
    auto xi = [W](int v, int i) { return W + v * W + i; };
    auto add = [&](int a, int b, double coeff) {
        if (a == b)
            q.add(a, a, coeff);
        else
            q.add(std::min(a, b), std::max(a, b), 0.5 * coeff);
    };
    for (int i = 0; i < W; ++i) add(i, i, c.c0);  // used-color count
    for (int v = 0; v < n; ++v) {                 // (1 - sum_i x_vi)^2, constant in the offset
        for (int i = 0; i < W; ++i) {
            add(xi(v, i), xi(v, i), c.c1);
            for (int j = i + 1; j < W; ++j) add(xi(v, i), xi(v, j), 2.0 * c.c1);
            add(xi(v, i), xi(v, i), -2.0 * c.c1);
        }
    }
    for (const auto& [u, v] : g.edges()) {
        for (int i = 0; i < W; ++i) {
            add(xi(u, i), xi(v, i), c.c1);  // conflict
            // (1 - w_i)(x_ui + x_vi)
            add(xi(u, i), xi(u, i), c.c2);
            add(xi(v, i), xi(v, i), c.c2);
            add(i, xi(u, i), -c.c2);
            add(i, xi(v, i), -c.c2);
        }
    }
    return q;
}

std::vector<int> random_binary(int k, std::mt19937& rng) {
    std::vector<int> s(k);
    for (int& b : s) b = static_cast<int>(rng() & 1);
    return s;
}

}  // namespace

TEST_CASE("heuristic penalties") {
    PenaltyCoefficients a = heuristic_penalties(10, 0.5);
    CHECK(a.c0 == 1.0);
    CHECK(a.c1 == 15.0);
    CHECK(a.c2 == 2.5);
    CHECK_FALSE(a.certified);

    PenaltyCoefficients b = heuristic_penalties(100, 0.9);
    CHECK(b.c1 == 100.0);

    PenaltyCoefficients c = heuristic_penalties(1, 0.0);
    CHECK(c.c0 > 0.0);
    CHECK(c.c1 == 10.0);
    CHECK(c.c2 > 0.0);

    // density fallback: K4 has p-hat = 1
    PenaltyCoefficients d = heuristic_penalties(erdos_renyi(4, 1.0, 0));
    CHECK(d.c1 == 14.0);
}

TEST_CASE("certified penalties satisfy the strict bounds") {
    PenaltyCoefficients a = certified_penalties(2, 1);
    CHECK(a.c0 == 1.0);
    CHECK(a.c2 == 3.0);
    CHECK(a.c1 == 15.0);
    CHECK(a.certified);
    CHECK(penalties_certified_for(a, 2, 1));

    PenaltyCoefficients b = certified_penalties(1, 0);
    CHECK(b.c2 == 2.0);
    CHECK(b.c1 == 2.0);

    PenaltyCoefficients c = certified_penalties(4, 9);
    CHECK(c.c2 == 5.0);
    CHECK(c.c1 == 365.0);

    // iff: shaving the slack off either coefficient breaks certification
    PenaltyCoefficients weak1 = a;
    weak1.c1 = 14.0;
    CHECK_FALSE(penalties_certified_for(weak1, 2, 1));
    PenaltyCoefficients weak2 = a;
    weak2.c2 = 2.0;
    CHECK_FALSE(penalties_certified_for(weak2, 2, 1));
}

TEST_CASE("three-variable inequality splits into two quadratic constraints") {
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b)
            for (int c = 0; c <= 1; ++c) {
                const bool lhs = a + b <= c;
                const bool rhs = (a * b == 0) && ((1 - c) * (a + b) == 0);
                CHECK(lhs == rhs);
            }
}

TEST_CASE("hamiltonian_terms reference values") {
    Graph g = k2();
    SUBCASE("feasible coloring counts only used colors") {
        std::vector<int> w = {1, 1};
        std::vector<int> x = {1, 0, 0, 1};
        HamiltonianTerms t = hamiltonian_terms(g, 2, w, x);
        CHECK(t.colors_used == 2);
        CHECK(t.vertex_violations == 0);
        CHECK(t.edge_conflicts == 0);
        CHECK(t.indicator_violations == 0);
    }
    SUBCASE("all-zero assignment violates exactly-one everywhere") {
        std::vector<int> w = {0, 0};
        std::vector<int> x = {0, 0, 0, 0};
        HamiltonianTerms t = hamiltonian_terms(g, 2, w, x);
        CHECK(t.colors_used == 0);
        CHECK(t.vertex_violations == 2);
        CHECK(t.edge_conflicts == 0);
        CHECK(t.indicator_violations == 0);
    }
    SUBCASE("conflicting color without its indicator") {
        std::vector<int> w = {0, 0};
        std::vector<int> x = {1, 0, 1, 0};
        HamiltonianTerms t = hamiltonian_terms(g, 2, w, x);
        CHECK(t.edge_conflicts == 1);
        CHECK(t.indicator_violations == 2);
    }
}

TEST_CASE("proposed encoding on K2") {
    Graph g = k2();
    PenaltyCoefficients c = certified_penalties(2, g.n_edges());
    QuboProblem q = build_proposed_qubo(g, 2, c);
    CHECK(q.dimension() == 6);

    // w = (1,1), proper coloring
    std::vector<int> s1 = {1, 1, 1, 0, 0, 1};
    CHECK(q.energy(s1) == 2.0 * c.c0);

    // w = (1,0), both on color 0: one conflict
    std::vector<int> s2 = {1, 0, 1, 0, 1, 0};
    CHECK(q.energy(s2) == c.c0 + c.c1);

    // all zeros: only the exactly-one constant remains
    std::vector<int> s3(6, 0);
    CHECK(q.energy(s3) == c.c1 * g.n_vertices());
}

TEST_CASE("assembled energies match the term-by-term Hamiltonian exactly") {
    for (int seed = 0; seed < 6; ++seed) {
        const int n = 3 + seed % 2;
        const int W = 2 + seed % 2;
        Graph g = erdos_renyi(n, 0.6, 70 + seed);
        PenaltyCoefficients c = certified_penalties(W, g.n_edges());
        QuboProblem q = build_proposed_qubo(g, W, c);

        const int K = q.dimension();
        REQUIRE(K <= 16);
        std::vector<int> s(K);
        for (std::uint32_t bits = 0; bits < (1u << K); ++bits) {
            for (int i = 0; i < K; ++i) s[i] = (bits >> i) & 1;
            std::span<const int> w(s.data(), W);
            std::span<const int> x(s.data() + W, static_cast<std::size_t>(n) * W);
            const double expected = hamiltonian_value(hamiltonian_terms(g, W, w, x), c);
            CHECK(q.energy(s) == expected);  // exact: all values are dyadic
        }
    }
}

TEST_CASE("block assembly equals naive assembly entrywise") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 5);
        const int W = 1 + static_cast<int>(rng() % 4);
        Graph g = erdos_renyi(n, 0.5, 500 + trial);
        PenaltyCoefficients c =
            trial % 2 ? certified_penalties(W, g.n_edges()) : heuristic_penalties(n, 0.5);
        QuboProblem fast = build_proposed_qubo(g, W, c);
        QuboProblem slow = reference_proposed(g, W, c);
        REQUIRE(fast.dimension() == slow.dimension());
        CHECK(fast.offset() == slow.offset());
        for (int i = 0; i < fast.dimension(); ++i)
            for (int j = i; j < fast.dimension(); ++j)
                CHECK(fast.at(i, j) == doctest::Approx(slow.at(i, j)).epsilon(1e-14));
    }

    Graph big = erdos_renyi(60, 0.5, 1234);
    PenaltyCoefficients c = heuristic_penalties(60, 0.5);
    auto t0 = std::chrono::steady_clock::now();
    QuboProblem fast = build_proposed_qubo(big, 15, c);
    auto t1 = std::chrono::steady_clock::now();
    QuboProblem slow = reference_proposed(big, 15, c);
    auto t2 = std::chrono::steady_clock::now();
    MESSAGE("assembly K=", fast.dimension(),
            " block: ", std::chrono::duration<double>(t1 - t0).count(),
            "s naive: ", std::chrono::duration<double>(t2 - t1).count(), "s");
}

TEST_CASE("paper-literal variant differs only in the documented entries") {
    Graph g = k3();
    PenaltyCoefficients c = heuristic_penalties(3, 0.5);
    QuboProblem corrected = build_proposed_qubo(g, 2, c);
    QuboProblem literal = build_proposed_qubo(g, 2, c, true);
    const int W = 2;
    auto xi = [&](int v, int i) { return W + v * W + i; };

    for (int v = 0; v < 3; ++v) {
        for (int i = 0; i < W; ++i) {
            // no degree correction on the x diagonal
            CHECK(literal.at(xi(v, i), xi(v, i)) == -c.c1);
            CHECK(corrected.at(xi(v, i), xi(v, i)) == -c.c1 + c.c2 * g.degree(v));
        }
    }
    for (const auto& [u, v] : g.edges())
        for (int i = 0; i < W; ++i) {
            CHECK(literal.at(xi(u, i), xi(v, i)) == c.c1);  // doubled conflict weight
            CHECK(corrected.at(xi(u, i), xi(v, i)) == 0.5 * c.c1);
        }
    // shared parts agree
    for (int i = 0; i < W; ++i) {
        CHECK(literal.at(i, i) == corrected.at(i, i));
        for (int v = 0; v < 3; ++v) CHECK(literal.at(i, xi(v, i)) == corrected.at(i, xi(v, i)));
    }
}

TEST_CASE("original encoding is a satisfiability gadget") {
    SUBCASE("proper coloring has zero energy") {
        QuboProblem q = build_original_qubo(k2(), 2, 7.0);
        CHECK(q.dimension() == 4);
        std::vector<int> proper = {1, 0, 0, 1};
        CHECK(q.energy(proper) == 0.0);
    }
    SUBCASE("K3 cannot be 2-colored") {
        QuboProblem q = build_original_qubo(k3(), 2, 5.0);
        CHECK(exhaustive_qubo_min(q).minimum > 0.0);
    }
    SUBCASE("zero energy exactly at the chromatic number") {
        for (int seed = 0; seed < 8; ++seed) {
            Graph g = erdos_renyi(6, 0.5, 900 + seed);
            const int chi = chromatic_number(g).chromatic_number;
            CHECK(exhaustive_qubo_min(build_original_qubo(g, chi, 3.0)).minimum == 0.0);
            if (chi > 1)
                CHECK(exhaustive_qubo_min(build_original_qubo(g, chi - 1, 3.0)).minimum > 0.0);
        }
    }
}

TEST_CASE("builders reject a zero color bound") {
    CHECK_THROWS_AS(build_proposed_qubo(k2(), 0, certified_penalties(1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_original_qubo(k2(), 0, 1.0), std::invalid_argument);
}

TEST_CASE("energy checks dimensions") {
    QuboProblem q = build_original_qubo(k2(), 2, 1.0);
    std::vector<int> bad = {1, 0, 1};
    CHECK_THROWS_AS(q.energy(bad), std::invalid_argument);
}

TEST_CASE("ising conversion") {
    SUBCASE("single variable") {
        QuboProblem q(1, QuboLayout{Encoding::Raw, 0, 0}, PenaltyCoefficients{}, 0.0);
        q.set(0, 0, 4.0);
        IsingProblem ising = to_ising(q);
        CHECK(ising.h[0] == 2.0);
        CHECK(ising.offset() == 2.0);
        std::vector<int> down = {-1}, up = {1};
        CHECK(ising.energy(down) == 0.0);
        CHECK(ising.energy(up) == 4.0);
    }
    SUBCASE("zero matrix keeps only the offset") {
        QuboProblem q(3, QuboLayout{Encoding::Raw, 0, 0}, PenaltyCoefficients{}, 5.0);
        IsingProblem ising = to_ising(q);
        for (int i = 0; i < 3; ++i) {
            CHECK(ising.h[i] == 0.0);
            for (int j = 0; j < 3; ++j) CHECK(ising.coupling(i, j) == 0.0);
        }
        CHECK(ising.offset() == 5.0);
    }
    SUBCASE("every energy level is preserved") {
        std::mt19937 rng(21);
        std::uniform_real_distribution<double> val(-2.0, 2.0);
        for (int trial = 0; trial < 20; ++trial) {
            const int K = 2 + static_cast<int>(rng() % 9);
            QuboProblem q(K, QuboLayout{Encoding::Raw, 0, 0}, PenaltyCoefficients{}, val(rng));
            for (int i = 0; i < K; ++i)
                for (int j = i; j < K; ++j) q.set(i, j, val(rng));
            IsingProblem ising = to_ising(q);
            std::vector<int> b(K), spins(K);
            for (std::uint32_t bits = 0; bits < (1u << K); ++bits) {
                for (int i = 0; i < K; ++i) {
                    b[i] = (bits >> i) & 1;
                    spins[i] = b[i] ? 1 : -1;
                }
                CHECK(ising.energy(spins) == doctest::Approx(q.energy(b)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("qubo text format round trip") {
    Graph g = erdos_renyi(5, 0.6, 77);
    PenaltyCoefficients c = certified_penalties(3, g.n_edges());
    QuboProblem q = build_proposed_qubo(g, 3, c);

    std::stringstream buf;
    write_qubo(q, buf);
    QuboProblem back = read_qubo(buf);
    REQUIRE(back.dimension() == q.dimension());
    CHECK(back.offset() == q.offset());
    for (int i = 0; i < q.dimension(); ++i)
        for (int j = i; j < q.dimension(); ++j) CHECK(back.at(i, j) == q.at(i, j));

    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> s = random_binary(q.dimension(), rng);
        CHECK(back.energy(s) == q.energy(s));
    }
}
