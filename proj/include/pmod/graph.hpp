#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace pmod {

enum class DensityRole { primal, blocker };

// Nonnegative value per edge, indexed by edge id.  The role tag records
// whether the values live on the primal side (rho, lengths) or the blocker
// side (eta, capacities); the math does not branch on it but reports do.
struct Density {
    std::vector<double> values;
    DensityRole role = DensityRole::primal;

    Density() = default;
    explicit Density(std::vector<double> v, DensityRole r = DensityRole::primal)
        : values(std::move(v)), role(r) {}

    static Density constant(int edge_count, double value,
                            DensityRole r = DensityRole::primal);

    double operator[](int e) const { return values[static_cast<size_t>(e)]; }
    double& operator[](int e) { return values[static_cast<size_t>(e)]; }
    int size() const { return static_cast<int>(values.size()); }

    // Throws if the length differs from edge_count or any entry is negative
    // or non-finite.
    void check(int edge_count, const char* what = "density") const;
};

struct Edge {
    int tail = -1;
    int head = -1;
    double weight = 1.0;
};

// Finite weighted multigraph with string vertex labels.  Edge ids are dense
// 0..m-1 in insertion order and are the indexing convention for every
// density, usage row and report in the library.  Build once, then use as
// const; none of the algorithms mutate a graph.
class Graph {
public:
    explicit Graph(bool directed = false) : directed_(directed) {}

    // Returns the index of the (possibly existing) vertex with this label.
    int add_vertex(const std::string& label);
    // Adds an edge and returns its id.  Self loops and weights outside
    // (0, inf) are rejected.
    int add_edge(const std::string& tail, const std::string& head, double weight = 1.0);
    int add_edge(int tail, int head, double weight = 1.0);

    bool directed() const { return directed_; }
    int vertex_count() const { return static_cast<int>(labels_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }
    double weight(int e) const { return edges_[static_cast<size_t>(e)].weight; }

    const std::string& label(int v) const { return labels_[static_cast<size_t>(v)]; }
    // Index for a label, or -1 when absent.
    int find_vertex(const std::string& label) const;
    // Index for a label; throws ParseError when absent.
    int vertex(const std::string& label) const;

    // Human-readable key for an edge: "u-v", with "#k" appended for the
    // k-th parallel copy (k >= 1).  Keys are stable and unique.
    std::string edge_key(int e) const;

    // (edge id, neighbour vertex) pairs incident to v.  For directed graphs
    // only out-edges are listed.
    const std::vector<std::pair<int, int>>& out_edges(int v) const {
        return adjacency_[static_cast<size_t>(v)];
    }

    Density sigma() const;
    double sigma_total() const;

    // True when the underlying undirected graph is connected (vacuously true
    // for the empty graph).
    bool connected() const;

    // Copy of the graph with the same topology and the given edge weights.
    Graph reweighted(const Density& new_sigma) const;

    // Parses "tail head [weight]" lines; '#' starts a comment, blank lines
    // are skipped.
    static Graph from_edge_list(const std::string& text, bool directed = false);
    // Parses {"directed": bool, "edges": [{"u":..,"v":..,"w":..}, ...]}.
    static Graph from_json(const std::string& text);
    // Dispatches on format ("edge-list" or "json").
    static Graph load(const std::string& text, const std::string& format,
                      bool directed = false);

private:
    bool directed_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> label_index_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adjacency_;
};

struct PathResult {
    double length = 0.0;
    std::vector<int> edges;
    std::vector<int> vertices; // a..b inclusive
};

// Dijkstra with edge lengths from `lengths` (role ignored).  Zero lengths
// are allowed.  Throws FamilyEmptyError when b is unreachable from a.
PathResult shortest_path(const Graph& g, int a, int b, const Density& lengths);

// Hop count of an unweighted shortest a-b path.
int hop_distance(const Graph& g, int a, int b);

struct CutResult {
    double value = 0.0;
    std::vector<int> edges;         // edges crossing the cut
    std::vector<char> source_side;  // per-vertex indicator
};

// Minimum a-b cut for undirected graphs via max-flow (each edge usable in
// both directions at its capacity).  Throws UnsupportedError for directed
// graphs and FamilyEmptyError when a and b are disconnected (the separating
// edge set is empty, which is not a usable object).
CutResult min_cut(const Graph& g, int a, int b, const Density& capacities);

// Two-point effective resistance with conductances sigma(e); solves the
// reduced Laplacian system and checks the residual.  Undirected connected
// graphs only.
double effective_resistance(const Graph& g, int a, int b);

struct TreeResult {
    double total = 0.0;
    std::vector<int> edges; // ascending edge ids
};

// Minimum spanning tree under `lengths` (Kruskal; ties broken by edge id).
// Undirected connected graphs only.
TreeResult minimum_spanning_tree(const Graph& g, const Density& lengths);

// Number of spanning trees (Kirchhoff), rounded from the determinant of a
// reduced unweighted Laplacian.  Intended for small graphs.
double spanning_tree_count(const Graph& g);

} // namespace pmod
