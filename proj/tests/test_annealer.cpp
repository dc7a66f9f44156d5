#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "wa/annealer.hpp"
#include "wa/qubo.hpp"

using namespace wa;

namespace {

IsingProblem random_ising(int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coupling(-1.0, 1.0);
    std::uniform_real_distribution<double> field(-0.5, 0.5);
    IsingProblem p(k);
    for (int i = 0; i < k; ++i) {
        p.h[i] = field(rng);
        for (int j = i + 1; j < k; ++j) p.set_coupling(i, j, coupling(rng));
    }
    return p;
}

double exhaustive_ising_min(const IsingProblem& p) {
    const int k = p.dimension();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> spins(k);
    for (std::uint32_t bits = 0; bits < (1u << k); ++bits) {
        for (int i = 0; i < k; ++i) spins[i] = (bits >> i) & 1 ? 1 : -1;
        best = std::min(best, p.energy(spins));
    }
    return best;
}

}  // namespace

TEST_CASE("single spin aligns against its field") {
    IsingProblem p(1);
    p.h[0] = 1.0;
    AnnealParams params = default_params(1);
    params.n_attempts = 4;
    AnnealResult res = simcim_solve(p, params);
    CHECK(res.best_spins == std::vector<int>{-1});
    CHECK(res.best_energy == -1.0);
    CHECK(res.iterations_run == params.n_iterations);
}

TEST_CASE("ferromagnetic pair aligns") {
    IsingProblem p(2);
    p.set_coupling(0, 1, -1.0);
    AnnealParams params = default_params(2);
    params.n_attempts = 4;
    AnnealResult res = simcim_solve(p, params);
    CHECK(res.best_energy == -1.0);
    CHECK(res.best_spins[0] == res.best_spins[1]);
}

TEST_CASE("noiseless dynamics saturate from a broken-symmetry start") {
    IsingProblem p(2);
    p.set_coupling(0, 1, -1.0);
    AnnealParams params;
    params.n_iterations = 200;
    params.n_attempts = 1;
    params.sigma = 0.0;
    params.pump_start = params.pump_end = 0.5;
    params.zeta = 1.0;
    params.initial_state = {0.1, 0.1};
    params.collect_traces = true;
    AnnealResult res = simcim_solve(p, params);
    CHECK(res.best_energy == -1.0);
    CHECK(res.traces[0].energy.back() == -1.0);
}

TEST_CASE("identical runs are bit-identical, independent of thread count") {
    IsingProblem p = random_ising(24, 77);
    AnnealParams params = default_params(24);
    params.n_attempts = 8;
    params.seed = 123;

    AnnealResult a = simcim_solve(p, params);
    AnnealResult b = simcim_solve(p, params);
    CHECK(a.best_energy == b.best_energy);
    CHECK(a.best_spins == b.best_spins);

    for (int threads : {2, 3, 8}) {
        AnnealParams pt = params;
        pt.n_threads = threads;
        AnnealResult c = simcim_solve(p, pt);
        CHECK(c.best_energy == a.best_energy);
        CHECK(c.best_spins == a.best_spins);
    }
}

TEST_CASE("best energy never exceeds any scored snapshot") {
    IsingProblem p = random_ising(16, 5);
    AnnealParams params = default_params(16);
    params.n_attempts = 3;
    params.collect_traces = true;
    AnnealResult res = simcim_solve(p, params);
    REQUIRE(res.traces.size() == 3);
    double trace_min = std::numeric_limits<double>::infinity();
    for (const auto& tr : res.traces)
        for (double e : tr.energy) trace_min = std::min(trace_min, e);
    CHECK(res.best_energy <= trace_min);
    CHECK(p.energy(res.best_spins) == res.best_energy);
}

TEST_CASE("extreme parameters stay bounded through the activation clip") {
    IsingProblem p = random_ising(8, 9);
    AnnealParams params;
    params.n_iterations = 300;
    params.n_attempts = 2;
    params.zeta = 100.0;
    params.step = 10.0;
    params.sigma = 2.0;
    params.quantization_cap = 5.0;
    AnnealResult res = simcim_solve(p, params);
    CHECK(std::isfinite(res.best_energy));
    for (int s : res.best_spins) CHECK((s == 1 || s == -1));
}

TEST_CASE("feasibility filter keeps the best passing snapshot") {
    IsingProblem p = random_ising(10, 31);
    AnnealParams params = default_params(10);
    params.n_attempts = 8;
    FeasibleFn first_up = [](std::span<const int> spins) { return spins[0] == 1; };
    AnnealResult res = simcim_solve(p, params, first_up);
    REQUIRE(res.has_feasible);
    CHECK(res.best_feasible_spins[0] == 1);
    CHECK(res.best_feasible_energy >= res.best_energy);
    CHECK(p.energy(res.best_feasible_spins) == res.best_feasible_energy);
}

TEST_CASE("non-finite dynamics abort the attempt") {
    IsingProblem p(2);
    p.h[0] = std::numeric_limits<double>::quiet_NaN();
    AnnealParams params = default_params(2);
    params.n_attempts = 3;
    AnnealResult res = simcim_solve(p, params);
    CHECK(res.aborted_attempts == 3);
}

TEST_CASE("time limit truncates and reports best-so-far") {
    IsingProblem p = random_ising(20, 41);
    AnnealParams params = default_params(20);
    params.n_iterations = 50'000'000;  // far beyond the budget
    params.n_attempts = 1;
    params.time_limit_s = 0.05;
    AnnealResult res = simcim_solve(p, params);
    CHECK(res.truncated);
    CHECK(res.iterations_run < params.n_iterations);
    CHECK(std::isfinite(res.best_energy));
}

TEST_CASE("default parameter scaling") {
    CHECK(default_params(44).n_iterations == 1440);
    CHECK(default_params(4848).n_iterations == 49480);
    AnnealParams one = default_params(1);
    CHECK(one.n_attempts == 64);
    CHECK(one.step > 0.0);
    CHECK_THROWS_AS(default_params(0), std::invalid_argument);
}

TEST_CASE("finds exhaustive optima on small random instances") {
    int hits = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        const int k = 8 + t % 5;
        IsingProblem p = random_ising(k, 900 + t);
        AnnealParams params = default_params(k);
        params.n_attempts = 16;
        params.seed = t;
        AnnealResult res = simcim_solve(p, params);
        if (res.best_energy == doctest::Approx(exhaustive_ising_min(p)).epsilon(1e-9)) ++hits;
    }
    CHECK(hits >= trials - 1);
}
