#include "wa/qubo.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wa {

PenaltyCoefficients heuristic_penalties(int n_vertices, double p) {
    if (n_vertices < 1) throw std::invalid_argument("heuristic_penalties: n_vertices must be >= 1");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("heuristic_penalties: p outside [0, 1]");
    PenaltyCoefficients c;
    c.c0 = 1.0;
    c.c1 = 10.0 + p * n_vertices;
    c.c2 = 2.5;
    c.certified = false;
    return c;
}

PenaltyCoefficients heuristic_penalties(const Graph& g) {
    const int n = g.n_vertices();
    double density = n > 1 ? 2.0 * g.n_edges() / (static_cast<double>(n) * (n - 1)) : 0.0;
    return heuristic_penalties(n, density);
}

PenaltyCoefficients certified_penalties(int max_colors, int n_edges) {
    if (max_colors < 1) throw std::invalid_argument("certified_penalties: W must be >= 1");
    if (n_edges < 0) throw std::invalid_argument("certified_penalties: negative edge count");
    PenaltyCoefficients c;
    c.c0 = 1.0;
    c.c2 = static_cast<double>(max_colors) + 1.0;
    c.c1 = 2.0 * n_edges * max_colors * c.c2 + max_colors + 1.0;
    c.certified = true;
    return c;
}

bool penalties_certified_for(const PenaltyCoefficients& c, int max_colors, int n_edges) {
    return c.c1 > 2.0 * n_edges * max_colors * c.c2 + max_colors * c.c0 &&
           c.c2 > max_colors * c.c0;
}

// --- QuboProblem ---

QuboProblem::QuboProblem(int dimension, QuboLayout layout, PenaltyCoefficients penalties,
                         double offset)
    : k_(dimension), layout_(layout), penalties_(penalties), offset_(offset) {
    if (k_ < 1) throw std::invalid_argument("qubo: dimension must be >= 1");
    data_.assign(static_cast<std::size_t>(k_) * (k_ + 1) / 2, 0.0);
}

std::size_t QuboProblem::pack(int i, int j) const {
    if (i < 0 || j < 0 || i >= k_ || j >= k_) throw std::out_of_range("qubo: index out of range");
    if (i > j) std::swap(i, j);
    // row-major upper triangle: row i starts after i full rows
    return static_cast<std::size_t>(i) * k_ - static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
}

double QuboProblem::energy(std::span<const int> s) const {
    if (static_cast<int>(s.size()) != k_)
        throw std::invalid_argument("qubo energy: dimension mismatch");
    double acc = offset_;
    std::size_t idx = 0;
    for (int i = 0; i < k_; ++i) {
        acc += data_[idx++] * s[i] * s[i];
        for (int j = i + 1; j < k_; ++j, ++idx)
            if (s[i] && s[j]) acc += 2.0 * data_[idx];
    }
    return acc;
}

// --- IsingProblem ---

IsingProblem::IsingProblem(int dimension) : k_(dimension) {
    if (k_ < 1) throw std::invalid_argument("ising: dimension must be >= 1");
    upper_.assign(static_cast<std::size_t>(k_) * (k_ - 1) / 2, 0.0);
    h.assign(k_, 0.0);
}

namespace {
std::size_t strict_upper_index(int i, int j, int k) {
    if (i > j) std::swap(i, j);
    // row i holds k-1-i entries, columns i+1..k-1
    return static_cast<std::size_t>(i) * (2 * k - i - 1) / 2 + (j - i - 1);
}
}  // namespace

double IsingProblem::coupling(int i, int j) const {
    if (i < 0 || j < 0 || i >= k_ || j >= k_) throw std::out_of_range("ising: index out of range");
    if (i == j) return 0.0;
    return upper_[strict_upper_index(i, j, k_)];
}

void IsingProblem::set_coupling(int i, int j, double value) {
    if (i < 0 || j < 0 || i >= k_ || j >= k_) throw std::out_of_range("ising: index out of range");
    if (i == j) throw std::invalid_argument("ising: diagonal coupling must stay zero");
    upper_[strict_upper_index(i, j, k_)] = value;
}

double IsingProblem::energy(std::span<const int> spins) const {
    if (static_cast<int>(spins.size()) != k_)
        throw std::invalid_argument("ising energy: dimension mismatch");
    double acc = offset_;
    for (int i = 0; i < k_; ++i) acc += h[i] * spins[i];
    std::size_t idx = 0;
    for (int i = 0; i < k_; ++i)
        for (int j = i + 1; j < k_; ++j, ++idx) acc += upper_[idx] * spins[i] * spins[j];
    return acc;
}

// --- Hamiltonian reference evaluation ---

HamiltonianTerms hamiltonian_terms(const Graph& g, int max_colors, std::span<const int> w,
                                   std::span<const int> x) {
    const int n = g.n_vertices();
    const int W = max_colors;
    if (static_cast<int>(w.size()) != W || static_cast<int>(x.size()) != n * W)
        throw std::invalid_argument("hamiltonian_terms: dimension mismatch");

    HamiltonianTerms t;
    for (int i = 0; i < W; ++i) t.colors_used += w[i];
    for (int v = 0; v < n; ++v) {
        long long row = 0;
        for (int i = 0; i < W; ++i) row += x[v * W + i];
        t.vertex_violations += (1 - row) * (1 - row);
    }
    for (const auto& [u, v] : g.edges()) {
        for (int i = 0; i < W; ++i) {
            t.edge_conflicts += static_cast<long long>(x[u * W + i]) * x[v * W + i];
            t.indicator_violations +=
                static_cast<long long>(1 - w[i]) * (x[u * W + i] + x[v * W + i]);
        }
    }
    return t;
}

double hamiltonian_value(const HamiltonianTerms& t, const PenaltyCoefficients& c) {
    return c.c0 * t.colors_used + c.c1 * (t.vertex_violations + t.edge_conflicts) +
           c.c2 * t.indicator_violations;
}

// --- builders ---

QuboProblem build_proposed_qubo(const Graph& g, int max_colors, const PenaltyCoefficients& c,
                                bool paper_literal) {
    const int n = g.n_vertices();
    const int W = max_colors;
    if (W < 1) throw std::invalid_argument("build_proposed_qubo: W must be >= 1");

    const int K = (n + 1) * W;
    QuboProblem q(K, QuboLayout{Encoding::Proposed, W, n}, c, c.c1 * n);
    auto xidx = [W](int v, int i) { return W + v * W + i; };

    // usage indicators: c0 per w_i on the diagonal
    for (int i = 0; i < W; ++i) q.set(i, i, c.c0);

    // w-x cross block: -c2/2 * d_v between w_i and x_vi
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < W; ++i) q.set(i, xidx(v, i), -0.5 * c.c2 * g.degree(v));

    // per-vertex exactly-one blocks: +c1 off-diagonal, -c1 diagonal; the
    // x-linear part of the indicator term adds c2*d_v on the diagonal
    for (int v = 0; v < n; ++v) {
        double diag = -c.c1 + (paper_literal ? 0.0 : c.c2 * g.degree(v));
        for (int i = 0; i < W; ++i) {
            q.set(xidx(v, i), xidx(v, i), diag);
            for (int j = i + 1; j < W; ++j) q.set(xidx(v, i), xidx(v, j), c.c1);
        }
    }

    // edge-conflict entries; halved per symmetric pair so s^T Q s matches the
    // unordered edge sum exactly (the literal block form keeps the full c1,
    // which doubles this term's weight)
    const double edge_coeff = paper_literal ? c.c1 : 0.5 * c.c1;
    for (const auto& [u, v] : g.edges())
        for (int i = 0; i < W; ++i) q.add(xidx(u, i), xidx(v, i), edge_coeff);

    return q;
}

QuboProblem build_original_qubo(const Graph& g, int max_colors, double penalty) {
    const int n = g.n_vertices();
    const int W = max_colors;
    if (W < 1) throw std::invalid_argument("build_original_qubo: W must be >= 1");
    if (penalty <= 0.0) throw std::invalid_argument("build_original_qubo: penalty must be positive");

    const int K = n * W;
    PenaltyCoefficients c;
    c.c0 = 0.0;
    c.c1 = penalty;
    c.c2 = 0.0;
    QuboProblem q(K, QuboLayout{Encoding::Original, W, n}, c, penalty * n);
    auto xidx = [W](int v, int i) { return v * W + i; };

    for (int v = 0; v < n; ++v) {
        for (int i = 0; i < W; ++i) {
            q.set(xidx(v, i), xidx(v, i), -penalty);
            for (int j = i + 1; j < W; ++j) q.set(xidx(v, i), xidx(v, j), penalty);
        }
    }
    for (const auto& [u, v] : g.edges())
        for (int i = 0; i < W; ++i) q.add(xidx(u, i), xidx(v, i), 0.5 * penalty);

    return q;
}

IsingProblem to_ising(const QuboProblem& q) {
    const int K = q.dimension();
    IsingProblem ising(K);

    // b = (s+1)/2: pair couplings pick up 1/4 of twice the symmetric entry,
    // row sums land in the fields, the rest is constant
    double constant = q.offset();
    for (int i = 0; i < K; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < K; ++j) row_sum += q.at(i, j);
        ising.h[i] = 0.5 * row_sum;
        constant += 0.25 * row_sum + 0.25 * q.at(i, i);
        for (int j = i + 1; j < K; ++j) ising.set_coupling(i, j, 0.5 * q.at(i, j));
    }
    ising.set_offset(constant);
    return ising;
}

// --- text format ---

void write_qubo(const QuboProblem& q, std::ostream& out) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", q.offset());
    out << q.dimension() << ' ' << buf << '\n';
    for (int i = 0; i < q.dimension(); ++i) {
        for (int j = i; j < q.dimension(); ++j) {
            double v = q.at(i, j);
            if (v == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << i << ' ' << j << ' ' << buf << '\n';
        }
    }
}

QuboProblem read_qubo(std::istream& in) {
    int k = 0;
    double offset = 0.0;
    if (!(in >> k >> offset)) throw std::runtime_error("qubo file: bad header");
    QuboProblem q(k, QuboLayout{Encoding::Raw, 0, 0}, PenaltyCoefficients{}, offset);
    int i = 0, j = 0;
    double v = 0.0;
    while (in >> i >> j >> v) {
        if (i < 0 || j < i || j >= k) throw std::runtime_error("qubo file: bad entry indices");
        q.set(i, j, v);
    }
    return q;
}

void save_qubo(const QuboProblem& q, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_qubo(q, out);
}

QuboProblem load_qubo(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_qubo(in);
}

}  // namespace wa
