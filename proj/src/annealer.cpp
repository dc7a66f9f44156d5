#include "wa/annealer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace wa {

namespace {

using Clock = std::chrono::steady_clock;

// Row-compressed couplings; the dynamics run on the negated matrix so the
// mean field points down the energy gradient.
struct Csr {
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;
};

Csr build_csr(const IsingProblem& p, double scale) {
    const int k = p.dimension();
    Csr m;
    m.row_ptr.assign(k + 1, 0);
    std::vector<std::vector<std::pair<int, double>>> rows(k);
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            double v = p.coupling(i, j);
            if (v != 0.0) {
                rows[i].push_back({j, scale * v});
                rows[j].push_back({i, scale * v});
            }
        }
    }
    for (int i = 0; i < k; ++i) {
        m.row_ptr[i + 1] = m.row_ptr[i] + static_cast<int>(rows[i].size());
        for (const auto& [j, v] : rows[i]) {
            m.col.push_back(j);
            m.val.push_back(v);
        }
    }
    return m;
}

double spectral_norm_estimate(const Csr& m, int k) {
    if (k == 0) return 0.0;
    // fixed-seed start vector; power iteration on the symmetric couplings
    std::vector<double> v(k), next(k);
    std::uint64_t state = 0x5EED0F4A7C15ull;
    for (int i = 0; i < k; ++i) {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        v[i] = static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53 - 0.5;
    }
    double norm = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
        double vv = 0.0;
        for (double x : v) vv += x * x;
        vv = std::sqrt(vv);
        if (vv < 1e-300) return 0.0;
        for (double& x : v) x /= vv;
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < k; ++i)
            for (int e = m.row_ptr[i]; e < m.row_ptr[i + 1]; ++e)
                next[i] += m.val[e] * v[m.col[e]];
        norm = 0.0;
        for (double x : next) norm += x * x;
        norm = std::sqrt(norm);
        v.swap(next);
    }
    return norm;
}

struct AttemptOutcome {
    double best_energy = std::numeric_limits<double>::infinity();
    std::vector<int> best_spins;
    bool has_feasible = false;
    double best_feasible_energy = std::numeric_limits<double>::infinity();
    std::vector<int> best_feasible_spins;
    int iterations = 0;
    bool truncated = false;
    bool aborted = false;
    AttemptTrace trace;
};

struct ShardContext {
    const IsingProblem* problem;
    const AnnealParams* params;
    const FeasibleFn* feasible;
    const Csr* dynamics;  // negated couplings
    const Csr* couplings; // original couplings, for snapshot energies
    double zeta;
    Clock::time_point deadline;
    bool has_deadline;
};

// Runs attempts [first, last) in lockstep over a shared iteration loop.
// Every attempt owns its RNG stream (seed ^ attempt index), so results do
// not depend on how attempts are grouped into shards.
void run_shard(const ShardContext& ctx, int first, int last,
               std::vector<AttemptOutcome>& out) {
    const IsingProblem& problem = *ctx.problem;
    const AnnealParams& params = *ctx.params;
    const int k = problem.dimension();
    const int a_count = last - first;
    if (a_count <= 0) return;

    std::vector<std::mt19937_64> engines;
    std::vector<std::normal_distribution<double>> gauss(a_count,
                                                        std::normal_distribution<double>(0.0, 1.0));
    engines.reserve(a_count);
    for (int a = first; a < last; ++a)
        engines.emplace_back(params.seed ^ static_cast<std::uint64_t>(a));

    // spins and mean field, spin-major with attempts contiguous
    std::vector<double> spins(static_cast<std::size_t>(k) * a_count, 0.0);
    if (!params.initial_state.empty())
        for (int i = 0; i < k; ++i)
            for (int a = 0; a < a_count; ++a)
                spins[static_cast<std::size_t>(i) * a_count + a] =
                    std::clamp(params.initial_state[i], -1.0, 1.0);
    std::vector<double> field(static_cast<std::size_t>(k) * a_count, 0.0);
    std::vector<double> grad_sq(a_count, 0.0);
    std::vector<double> noise_scale(a_count, 0.0);
    std::vector<std::uint8_t> alive(a_count, 1);

    // sign snapshots with incremental energy bookkeeping (original sign)
    std::vector<std::vector<int>> snap(a_count, std::vector<int>(k, 1));
    std::vector<std::vector<double>> snap_field(a_count, std::vector<double>(k, 0.0));
    std::vector<double> snap_energy(a_count, 0.0);
    const Csr& orig = *ctx.couplings;
    for (int a = 0; a < a_count; ++a) {
        for (int i = 0; i < k; ++i)
            snap[a][i] = spins[static_cast<std::size_t>(i) * a_count + a] >= 0.0 ? 1 : -1;
        for (int i = 0; i < k; ++i) {
            double f = 0.0;
            for (int e = orig.row_ptr[i]; e < orig.row_ptr[i + 1]; ++e)
                f += orig.val[e] * snap[a][orig.col[e]];
            snap_field[a][i] = f;
        }
        double energy = problem.offset();
        for (int i = 0; i < k; ++i) {
            energy += problem.h[i] * snap[a][i];
            energy += 0.5 * snap_field[a][i] * snap[a][i];  // each pair counted once
        }
        snap_energy[a] = energy;
    }

    auto& results = out;
    auto consider = [&](int a, int iteration) {
        AttemptOutcome& r = results[first + a];
        const double energy = snap_energy[a];
        if (energy < r.best_energy) {
            r.best_energy = energy;
            r.best_spins = snap[a];
        }
        bool is_feasible = false;
        bool checked = false;
        if (*ctx.feasible && (params.collect_traces || energy < r.best_feasible_energy)) {
            is_feasible = (*ctx.feasible)(std::span<const int>(snap[a]));
            checked = true;
            if (is_feasible && energy < r.best_feasible_energy) {
                r.has_feasible = true;
                r.best_feasible_energy = energy;
                r.best_feasible_spins = snap[a];
            }
        }
        if (params.collect_traces && iteration >= 0) {
            r.trace.energy.push_back(energy);
            r.trace.feasible.push_back(checked && is_feasible ? 1 : 0);
        }
    };
    for (int a = 0; a < a_count; ++a) consider(a, -1);  // score the start state

    const Csr& dyn = *ctx.dynamics;
    const double zeta = ctx.zeta;
    const double sqrt_k = std::sqrt(static_cast<double>(k));
    const int iters = params.n_iterations;
    bool truncated = false;
    int completed = 0;

    for (int t = 0; t < iters; ++t) {
        if (ctx.has_deadline && Clock::now() > ctx.deadline) {
            truncated = true;
            break;
        }
        const double pump =
            iters > 1 ? params.pump_start + (params.pump_end - params.pump_start) * t / (iters - 1)
                      : params.pump_start;

        // mean field (descent direction): -h - J s, batched over attempts
        for (int i = 0; i < k; ++i) {
            double* f = &field[static_cast<std::size_t>(i) * a_count];
            const double bias = -problem.h[i];
            for (int a = 0; a < a_count; ++a) f[a] = bias;
            for (int e = dyn.row_ptr[i]; e < dyn.row_ptr[i + 1]; ++e) {
                const double v = dyn.val[e];
                const double* sj = &spins[static_cast<std::size_t>(dyn.col[e]) * a_count];
                for (int a = 0; a < a_count; ++a) f[a] += v * sj[a];
            }
        }

        std::fill(grad_sq.begin(), grad_sq.end(), 0.0);
        for (int i = 0; i < k; ++i) {
            const double* f = &field[static_cast<std::size_t>(i) * a_count];
            for (int a = 0; a < a_count; ++a) grad_sq[a] += zeta * f[a] * zeta * f[a];
        }
        for (int a = 0; a < a_count; ++a) {
            if (!alive[a]) continue;
            if (!std::isfinite(grad_sq[a])) {
                alive[a] = 0;
                results[first + a].aborted = true;
                continue;
            }
            noise_scale[a] = params.sigma * std::sqrt(grad_sq[a]) / sqrt_k;
        }

        const double cap = params.quantization_cap;
        for (int i = 0; i < k; ++i) {
            double* s = &spins[static_cast<std::size_t>(i) * a_count];
            const double* f = &field[static_cast<std::size_t>(i) * a_count];
            for (int a = 0; a < a_count; ++a) {
                if (!alive[a]) continue;
                double delta = pump * s[a] + zeta * f[a];
                if (params.sigma > 0.0) delta += noise_scale[a] * gauss[a](engines[a]);
                delta = std::clamp(delta, -cap, cap);  // gradient quantization
                s[a] = std::clamp(s[a] + params.step * delta, -1.0, 1.0);
            }
        }

        // refresh sign snapshots; energy maintained per flipped spin
        for (int a = 0; a < a_count; ++a) {
            if (!alive[a]) continue;
            auto& sg = snap[a];
            auto& sf = snap_field[a];
            for (int i = 0; i < k; ++i) {
                const int ns = spins[static_cast<std::size_t>(i) * a_count + a] >= 0.0 ? 1 : -1;
                if (ns == sg[i]) continue;
                snap_energy[a] += -2.0 * sg[i] * (sf[i] + problem.h[i]);
                sg[i] = ns;
                for (int e = orig.row_ptr[i]; e < orig.row_ptr[i + 1]; ++e)
                    sf[orig.col[e]] += 2.0 * ns * orig.val[e];
            }
            consider(a, t);
        }
        completed = t + 1;
    }

    for (int a = 0; a < a_count; ++a) {
        results[first + a].iterations = completed;
        results[first + a].truncated = truncated;
    }
}

}  // namespace

AnnealResult simcim_solve(const IsingProblem& problem, const AnnealParams& params,
                          const FeasibleFn& feasible) {
    const int k = problem.dimension();
    if (k < 1) throw std::invalid_argument("simcim_solve: empty problem");
    if (params.n_iterations < 1 || params.n_attempts < 1 || params.step <= 0.0 ||
        params.sigma < 0.0 || params.quantization_cap <= 0.0)
        throw std::invalid_argument("simcim_solve: invalid parameters");
    if (!params.initial_state.empty() && static_cast<int>(params.initial_state.size()) != k)
        throw std::invalid_argument("simcim_solve: initial state dimension mismatch");

    const Csr dynamics = build_csr(problem, -1.0);
    const Csr couplings = build_csr(problem, 1.0);

    double zeta = params.zeta;
    if (zeta <= 0.0) {
        const double norm = spectral_norm_estimate(couplings, k);
        zeta = norm > 1e-12 ? 1.0 / norm : 1.0;
    }

    ShardContext ctx;
    ctx.problem = &problem;
    ctx.params = &params;
    ctx.feasible = &feasible;
    ctx.dynamics = &dynamics;
    ctx.couplings = &couplings;
    ctx.zeta = zeta;
    ctx.has_deadline = params.time_limit_s > 0.0;
    ctx.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(params.time_limit_s));

    const int attempts = params.n_attempts;
    std::vector<AttemptOutcome> outcomes(attempts);
    const int threads = std::clamp(params.n_threads, 1, attempts);
    if (threads == 1) {
        run_shard(ctx, 0, attempts, outcomes);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            const int first = attempts * t / threads;
            const int last = attempts * (t + 1) / threads;
            pool.emplace_back(run_shard, std::cref(ctx), first, last, std::ref(outcomes));
        }
        for (auto& th : pool) th.join();
    }

    // deterministic reduction in attempt order
    AnnealResult result;
    result.best_energy = std::numeric_limits<double>::infinity();
    result.best_feasible_energy = std::numeric_limits<double>::infinity();
    for (int a = 0; a < attempts; ++a) {
        AttemptOutcome& o = outcomes[a];
        if (o.aborted) ++result.aborted_attempts;
        if (!o.best_spins.empty() && o.best_energy < result.best_energy) {
            result.best_energy = o.best_energy;
            result.best_spins = o.best_spins;
        }
        if (o.has_feasible && o.best_feasible_energy < result.best_feasible_energy) {
            result.has_feasible = true;
            result.best_feasible_energy = o.best_feasible_energy;
            result.best_feasible_spins = o.best_feasible_spins;
        }
        result.iterations_run = std::max(result.iterations_run, o.iterations);
        result.truncated = result.truncated || o.truncated;
        if (params.collect_traces) result.traces.push_back(std::move(o.trace));
    }
    return result;
}

AnnealParams default_params(int problem_size) {
    if (problem_size < 1) throw std::invalid_argument("default_params: size must be >= 1");
    AnnealParams p;
    p.n_iterations = 1000 + 10 * problem_size;
    p.n_attempts = 64;
    p.zeta = 0.0;  // auto: 1 / estimated coupling spectral norm
    p.sigma = 0.15;
    p.pump_start = -1.0;
    p.pump_end = 1.0;
    p.step = 0.05;
    p.quantization_cap = 1.0;
    return p;
}

void write_trace_csv(const AnnealResult& result, std::ostream& out) {
    out << "attempt,iteration,energy,feasible\n";
    for (std::size_t a = 0; a < result.traces.size(); ++a) {
        const auto& tr = result.traces[a];
        for (std::size_t t = 0; t < tr.energy.size(); ++t)
            out << a << ',' << t << ',' << tr.energy[t] << ','
                << static_cast<int>(tr.feasible[t]) << '\n';
    }
}

}  // namespace wa
