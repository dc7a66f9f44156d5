#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "wa/qubo.hpp"

namespace wa {

/// Hyperparameters for the SimCIM-style continuous spin dynamics.
/// The coloring solvers treat n_iterations <= 0 as "scale with the probe
/// dimension" (the default_params formula); simcim_solve itself requires a
/// positive count.
struct AnnealParams {
    int n_iterations = 1000;
    int n_attempts = 64;      // independent restarts
    double zeta = 0.0;        // feedforward factor; <= 0 means auto (1 / spectral-norm estimate)
    double sigma = 0.15;      // Gaussian noise scale
    double pump_start = -1.0; // linear pump ramp endpoints
    double pump_end = 1.0;
    double step = 0.05;       // update scale
    double quantization_cap = 1.0;  // gradient magnitude cap
    std::uint64_t seed = 0;
    double time_limit_s = 0.0;  // wall clock; 0 = unlimited
    int n_threads = 1;          // attempt-level parallelism
    bool collect_traces = false;
    std::vector<double> initial_state;  // optional continuous start; empty = zeros
};

struct AttemptTrace {
    std::vector<double> energy;        // sign-snapshot energy per iteration
    std::vector<std::uint8_t> feasible;
};

struct AnnealResult {
    std::vector<int> best_spins;  // +-1
    double best_energy = 0.0;
    bool has_feasible = false;
    std::vector<int> best_feasible_spins;
    double best_feasible_energy = 0.0;
    int iterations_run = 0;    // completed iterations (max over attempts)
    bool truncated = false;    // stopped by the time limit
    int aborted_attempts = 0;  // attempts killed by non-finite dynamics
    std::vector<AttemptTrace> traces;  // filled only when collect_traces
};

/// Feasibility predicate over a +-1 sign snapshot; the callback owns any
/// decoding, the annealer stays encoding-agnostic.
using FeasibleFn = std::function<bool(std::span<const int>)>;

/// Minimizes the Ising Hamiltonian with mean-field spin dynamics: each
/// iteration computes the descent field for every continuous spin, applies
/// the pump ramp, gradient-norm-scaled Gaussian noise and magnitude
/// quantization, then clips spins to [-1, 1]. Every iteration's sign
/// snapshot is scored and, when `feasible` is given, filtered for the best
/// feasible configuration. Deterministic for a fixed seed regardless of
/// n_threads.
AnnealResult simcim_solve(const IsingProblem& problem, const AnnealParams& params,
                          const FeasibleFn& feasible = {});

/// Documented defaults scaled to the problem size; zeta is left in auto
/// mode and resolved against the actual couplings inside simcim_solve.
AnnealParams default_params(int problem_size);

/// Diagnostic dump of collected traces: attempt,iteration,energy,feasible.
void write_trace_csv(const AnnealResult& result, std::ostream& out);

}  // namespace wa
