#include "wa/graph.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace wa {

Graph::Graph(int n_vertices, std::vector<std::pair<int, int>> edge_list) : n_(n_vertices) {
    if (n_ < 0) throw std::invalid_argument("graph: negative vertex count");
    for (auto& [u, v] : edge_list) {
        if (u < 0 || u >= n_ || v < 0 || v >= n_)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("graph: self-loop");
        if (u > v) std::swap(u, v);
    }
    std::sort(edge_list.begin(), edge_list.end());
    if (std::adjacent_find(edge_list.begin(), edge_list.end()) != edge_list.end())
        throw std::invalid_argument("graph: duplicate edge");
    edges_ = std::move(edge_list);

    adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
    degrees_.assign(n_, 0);
    for (const auto& [u, v] : edges_) {
        adj_[static_cast<std::size_t>(u) * n_ + v] = 1;
        adj_[static_cast<std::size_t>(v) * n_ + u] = 1;
        ++degrees_[u];
        ++degrees_[v];
    }
}

bool Graph::connected() const {
    if (n_ <= 1) return true;
    std::vector<std::vector<int>> nbrs(n_);
    for (const auto& [u, v] : edges_) {
        nbrs[u].push_back(v);
        nbrs[v].push_back(u);
    }
    std::vector<std::uint8_t> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : nbrs[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == n_;
}

PathInstance make_path_instance(Graph network, std::vector<std::vector<int>> paths) {
    for (const auto& path : paths) {
        if (path.size() < 2) throw std::invalid_argument("path instance: path shorter than one hop");
        std::set<std::pair<int, int>> used;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            int u = path[i], v = path[i + 1];
            if (u < 0 || u >= network.n_vertices() || v < 0 || v >= network.n_vertices() ||
                u == v || !network.adjacent(u, v))
                throw std::invalid_argument("path instance: hop is not a network edge");
            auto e = std::minmax(u, v);
            if (!used.insert({e.first, e.second}).second)
                throw std::invalid_argument("path instance: path repeats an edge");
        }
    }
    return PathInstance{std::move(network), std::move(paths)};
}

namespace {

// One uniform double in [0, 1) from the top 53 bits of a 64-bit draw;
// keeps generation independent of distribution implementations.
double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

struct Xoshiro256ss {
    // splitmix64-seeded xoshiro256**; fixed algorithm so byte-identical
    // regeneration does not depend on the standard library.
    std::uint64_t s[4];

    explicit Xoshiro256ss(std::uint64_t seed) {
        for (auto& w : s) {
            seed += 0x9E3779B97F4A7C15ull;
            std::uint64_t z = seed;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            w = z ^ (z >> 31);
        }
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t next() {
        std::uint64_t result = rotl(s[1] * 5, 7) * 9;
        std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
};

Graph sample_er(int n, double p, std::uint64_t seed) {
    Xoshiro256ss rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unit_double(rng.next()) < p) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

}  // namespace

Graph erdos_renyi(int n, double p, std::uint64_t seed, std::uint64_t* seed_used) {
    if (n < 1) throw std::invalid_argument("erdos_renyi: n must be >= 1");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("erdos_renyi: p outside [0, 1]");
    constexpr int kResampleBudget = 100000;
    for (int attempt = 0; attempt < kResampleBudget; ++attempt) {
        std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
        Graph g = sample_er(n, p, s);
        if (g.connected()) {
            if (seed_used) *seed_used = s;
            return g;
        }
    }
    std::ostringstream msg;
    msg << "erdos_renyi: no connected graph within " << kResampleBudget << " resamples (n=" << n
        << ", p=" << p << ")";
    throw std::runtime_error(msg.str());
}

Graph conflict_graph(const PathInstance& instance) {
    const auto n_paths = instance.paths.size();
    std::vector<std::set<std::pair<int, int>>> fibers(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        const auto& path = instance.paths[i];
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            auto e = std::minmax(path[k], path[k + 1]);
            fibers[i].insert({e.first, e.second});
        }
    }
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < n_paths; ++i) {
        for (std::size_t j = i + 1; j < n_paths; ++j) {
            bool shares = std::any_of(fibers[i].begin(), fibers[i].end(),
                                      [&](const auto& e) { return fibers[j].count(e) > 0; });
            if (shares) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return Graph(static_cast<int>(n_paths), std::move(edges));
}

ColoringSolution ldf_coloring(const Graph& g) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = g.n_vertices();
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return a < b;
    });

    ColoringSolution sol;
    sol.solver = solver_tag::kLdf;
    sol.colors.assign(n, -1);
    int max_color = -1;
    std::vector<std::uint8_t> used;
    for (int v : order) {
        used.assign(static_cast<std::size_t>(max_color) + 2, 0);
        for (int nb = 0; nb < n; ++nb)
            if (g.adjacent(v, nb) && sol.colors[nb] >= 0) used[sol.colors[nb]] = 1;
        int c = 0;
        while (used[c]) ++c;
        sol.colors[v] = c;
        max_color = std::max(max_color, c);
    }
    sol.n_colors = n > 0 ? max_color + 1 : 0;
    sol.feasible = true;
    sol.energy = sol.n_colors;  // used-color count at unit weight
    sol.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

// --- DIMACS ---

Graph read_dimacs(std::istream& in) {
    int n = -1;
    std::set<std::pair<int, int>> edges;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream iss(line);
        char tag;
        iss >> tag;
        if (tag == 'p') {
            std::string fmt;
            long long declared_m = 0;
            iss >> fmt >> n >> declared_m;
            if (!iss || (fmt != "edge" && fmt != "edges" && fmt != "col"))
                throw std::runtime_error("dimacs: bad problem line at " + std::to_string(ln));
        } else if (tag == 'e') {
            int u = 0, v = 0;
            iss >> u >> v;
            if (!iss || n < 0)
                throw std::runtime_error("dimacs: bad edge line at " + std::to_string(ln));
            if (u == v) throw std::runtime_error("dimacs: self-loop at line " + std::to_string(ln));
            if (u > v) std::swap(u, v);
            edges.insert({u - 1, v - 1});  // 1-based on disk
        }
    }
    if (n < 0) throw std::runtime_error("dimacs: missing problem line");
    return Graph(n, std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
}

void write_dimacs(const Graph& g, std::ostream& out) {
    out << "p edge " << g.n_vertices() << ' ' << g.n_edges() << '\n';
    for (const auto& [u, v] : g.edges()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
}

Graph load_dimacs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_dimacs(in);
}

void save_dimacs(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_dimacs(g, out);
}

// --- PathInstance JSON ---

PathInstance read_path_instance(std::istream& in) {
    nlohmann::json j;
    in >> j;
    int n = j.at("network").at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("network").at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    std::vector<std::vector<int>> paths;
    for (const auto& p : j.at("paths")) paths.push_back(p.get<std::vector<int>>());
    return make_path_instance(Graph(n, std::move(edges)), std::move(paths));
}

void write_path_instance(const PathInstance& instance, std::ostream& out) {
    nlohmann::json j;
    j["network"]["n"] = instance.network.n_vertices();
    auto edges = nlohmann::json::array();
    for (const auto& [u, v] : instance.network.edges()) edges.push_back({u, v});
    j["network"]["edges"] = std::move(edges);
    j["paths"] = instance.paths;
    out << j.dump(2) << '\n';
}

PathInstance load_path_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_path_instance(in);
}

}  // namespace wa
