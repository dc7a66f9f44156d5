#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wa/coloring.hpp"

namespace wa {

/// Undirected simple graph on vertices 0..n-1.
///
/// Stores the edge list (normalized u < v, sorted, duplicate-free) together
/// with a dense boolean adjacency matrix and the degree vector. Instances
/// are immutable after construction and safe to share across threads.
class Graph {
public:
    Graph() = default;
    /// Validates and normalizes the edge list. Throws std::invalid_argument
    /// on out-of-range ids, self-loops or duplicate edges.
    Graph(int n_vertices, std::vector<std::pair<int, int>> edge_list);

    int n_vertices() const { return n_; }
    int n_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    bool adjacent(int u, int v) const { return adj_[static_cast<std::size_t>(u) * n_ + v] != 0; }
    int degree(int v) const { return degrees_[v]; }
    const std::vector<int>& degrees() const { return degrees_; }
    /// Row-major n x n boolean adjacency matrix.
    const std::vector<std::uint8_t>& adjacency() const { return adj_; }

    bool connected() const;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::uint8_t> adj_;
    std::vector<int> degrees_;
};

/// An optical network plus a list of transmission paths (vertex sequences).
/// Use make_path_instance to get a validated instance.
struct PathInstance {
    Graph network;
    std::vector<std::vector<int>> paths;
};

/// Validates that every path walks along existing network edges, has at
/// least two vertices and repeats no edge. Throws std::invalid_argument.
PathInstance make_path_instance(Graph network, std::vector<std::vector<int>> paths);

/// Samples a connected Erdos-Renyi graph G(n, p). Each of the n(n-1)/2
/// candidate edges is included independently with probability p; if the draw
/// is disconnected the whole graph is resampled with seed+1, seed+2, ...
/// The seed that produced the returned graph is written to *seed_used when
/// given. Throws std::runtime_error when the resample budget is exhausted.
Graph erdos_renyi(int n, double p, std::uint64_t seed, std::uint64_t* seed_used = nullptr);

/// Reduces a wavelength-assignment instance to its conflict graph: one
/// vertex per path, an edge whenever two paths share at least one fiber.
Graph conflict_graph(const PathInstance& instance);

/// Greedy largest-degree-first coloring. Vertices are visited in
/// non-increasing degree order (ties broken by lowest id) and each receives
/// the smallest color unused among its already-colored neighbors.
/// Deterministic; always feasible.
ColoringSolution ldf_coloring(const Graph& g);

// --- DIMACS coloring format (p edge N M header, e u v lines, 1-based) ---

Graph read_dimacs(std::istream& in);
void write_dimacs(const Graph& g, std::ostream& out);
Graph load_dimacs(const std::string& path);
void save_dimacs(const Graph& g, const std::string& path);

// --- PathInstance JSON: {network:{n, edges:[[u,v],...]}, paths:[[...],...]} ---

PathInstance read_path_instance(std::istream& in);
void write_path_instance(const PathInstance& instance, std::ostream& out);
PathInstance load_path_instance(const std::string& path);

}  // namespace wa
