#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wa/graph.hpp"

namespace wa {

/// Weights of the three penalty groups in the color-minimizing Hamiltonian:
/// c0 scales the used-color count, c1 the coloring-constraint violations
/// (exactly-one-color and edge conflicts), c2 the usage-indicator
/// consistency term. `certified` marks coefficients built to provably make
/// the QUBO optimum coincide with the integer-program optimum.
struct PenaltyCoefficients {
    double c0 = 1.0;
    double c1 = 1.0;
    double c2 = 1.0;
    bool certified = false;
};

/// Empirical penalty choice: c0 = 1, c1 = 10 + p * n_vertices, c2 = 2.5,
/// where p is the edge probability of the generating model.
PenaltyCoefficients heuristic_penalties(int n_vertices, double p);
/// Same, with p estimated from the graph density 2*E / (V*(V-1)).
PenaltyCoefficients heuristic_penalties(const Graph& g);

/// Smallest integers with c0 = 1 satisfying c2 > W*c0 and
/// c1 > 2*n_edges*W*c2 + W*c0 strictly; these bounds guarantee the QUBO
/// minimum decodes to an optimal coloring whenever one with <= W colors
/// exists.
PenaltyCoefficients certified_penalties(int max_colors, int n_edges);

/// Checks the certification inequalities for a given instance size.
bool penalties_certified_for(const PenaltyCoefficients& c, int max_colors, int n_edges);

enum class Encoding { Proposed, Original, Raw };

struct QuboLayout {
    Encoding encoding = Encoding::Raw;
    int max_colors = 0;  // W
    int n_vertices = 0;
};

/// Symmetric QUBO: minimize s^T Q s + offset over binary vectors s.
/// The upper triangle is stored packed; at(i, j) mirrors transparently.
class QuboProblem {
public:
    QuboProblem() = default;
    QuboProblem(int dimension, QuboLayout layout, PenaltyCoefficients penalties, double offset);

    int dimension() const { return k_; }
    double offset() const { return offset_; }
    const QuboLayout& layout() const { return layout_; }
    const PenaltyCoefficients& penalties() const { return penalties_; }

    double at(int i, int j) const { return data_[pack(i, j)]; }
    void set(int i, int j, double value) { data_[pack(i, j)] = value; }
    void add(int i, int j, double value) { data_[pack(i, j)] += value; }

    /// s^T Q s + offset. Throws std::invalid_argument on dimension mismatch.
    double energy(std::span<const int> s) const;

private:
    std::size_t pack(int i, int j) const;

    int k_ = 0;
    QuboLayout layout_;
    PenaltyCoefficients penalties_;
    double offset_ = 0.0;
    std::vector<double> data_;  // packed upper triangle, row-major
};

/// Ising form: minimize sum_i h_i*s_i + sum_{i<j} J_ij*s_i*s_j + offset over
/// s in {-1,+1}^K. J is symmetric with zero diagonal (strict upper triangle
/// stored packed).
class IsingProblem {
public:
    IsingProblem() = default;
    explicit IsingProblem(int dimension);

    int dimension() const { return k_; }
    double offset() const { return offset_; }
    void set_offset(double v) { offset_ = v; }

    double coupling(int i, int j) const;
    void set_coupling(int i, int j, double value);

    std::vector<double> h;

    /// Hamiltonian of a +-1 spin configuration.
    double energy(std::span<const int> spins) const;

private:
    int k_ = 0;
    double offset_ = 0.0;
    std::vector<double> upper_;  // strict upper triangle, row-major
};

/// Counts of the four Hamiltonian ingredients for an assignment (w, x):
/// all are non-negative integers by construction.
struct HamiltonianTerms {
    long long colors_used = 0;           // sum of usage indicators w_i
    long long vertex_violations = 0;     // sum_v (1 - sum_i x_vi)^2
    long long edge_conflicts = 0;        // same-colored adjacent pairs
    long long indicator_violations = 0;  // colored vertices of an edge whose color is unflagged
};

/// Reference evaluation by direct summation of the defining formulas;
/// independent of the matrix assembly. `x` is n_vertices x W, vertex-major.
HamiltonianTerms hamiltonian_terms(const Graph& g, int max_colors, std::span<const int> w,
                                   std::span<const int> x);

/// Weighted total c0*H0 + c1*(H1+H2) + c2*H3 of the four terms.
double hamiltonian_value(const HamiltonianTerms& t, const PenaltyCoefficients& c);

/// Color-minimizing encoding over s = (w, x), dimension (n_vertices+1)*W.
/// The assembled matrix satisfies, for every binary (w, x):
///   s^T Q s + offset == c0*H0(w) + c1*(H1(x)+H2(x)) + c2*H3(w,x).
/// With `paper_literal` the historical block form is reproduced instead
/// (doubled edge-conflict weight, no degree diagonal); it penalizes the
/// same violations but does not satisfy the exact identity above.
QuboProblem build_proposed_qubo(const Graph& g, int max_colors, const PenaltyCoefficients& c,
                                bool paper_literal = false);

/// Classic decision encoding over s = x, dimension n_vertices*W: the energy
/// is penalty*(H1+H2), zero exactly on proper colorings with <= W colors.
QuboProblem build_original_qubo(const Graph& g, int max_colors, double penalty);

/// Exact QUBO -> Ising conversion via b = (s+1)/2; preserves all energies.
IsingProblem to_ising(const QuboProblem& q);

// --- QUBO text format: "K offset" header, then "i j value" lines for the
// nonzero upper triangle (0-based), full-precision decimal ---

void write_qubo(const QuboProblem& q, std::ostream& out);
QuboProblem read_qubo(std::istream& in);
void save_qubo(const QuboProblem& q, const std::string& path);
QuboProblem load_qubo(const std::string& path);

}  // namespace wa
