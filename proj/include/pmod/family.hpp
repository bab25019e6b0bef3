#pragma once

#include "pmod/graph.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pmod {

// One object gamma as a sparse usage vector: entries (edge id, N(gamma,e))
// sorted by edge id with strictly positive values.
struct UsageRow {
    std::vector<std::pair<int, double>> entries;
    std::string label;

    double dot(const std::vector<double>& x) const;
    double dot(const Density& x) const { return dot(x.values); }
    // Smallest positive usage value in this row.
    double min_positive() const;
    bool has_edge(int e) const;
    double usage(int e) const;
    std::vector<double> dense(int edge_count) const;

    // Sorts by edge id, merges duplicates, drops zeros; throws on negative
    // or non-finite values or on an empty (all-zero) result.
    void normalize(int edge_count);

    bool same_entries(const UsageRow& other, double tol = 0.0) const;
};

enum class FamilyKind { connect, cut, spanning_tree, explicit_rows };

// A family of objects on a fixed graph, presented through a minimisation
// oracle rather than an explicit list.  The graph must outlive the family.
class Family {
public:
    static Family connect(const Graph& g, const std::string& a, const std::string& b);
    static Family cut(const Graph& g, const std::string& a, const std::string& b);
    static Family spanning_trees(const Graph& g);
    static Family explicit_rows(const Graph& g, std::vector<UsageRow> rows);
    // {"rows":[{"edges":{"u-v":usage,...},"label":...}, ...]}; edge keys are
    // Graph::edge_key strings.
    static Family from_json(const Graph& g, const std::string& text);
    // "connect:a,b", "cut:a,b", "spanning-tree", or "explicit:<json>".
    static Family from_spec(const Graph& g, const std::string& spec);

    FamilyKind kind() const { return kind_; }
    const Graph& graph() const { return *graph_; }
    // Endpoint vertex indices (connect/cut only).
    int endpoint_a() const { return a_; }
    int endpoint_b() const { return b_; }
    const std::vector<UsageRow>& rows() const; // explicit_rows only

    // Same family definition bound to a graph with identical topology
    // (typically a reweighted copy).
    Family rebind(const Graph& g) const;

    // Smallest positive usage value over the whole family.
    double n_min() const;

    struct OracleResult {
        UsageRow row;
        double value = 0.0; // rho-length of the returned object
    };
    // Minimises ell_rho(gamma) over the family.  Throws FamilyEmptyError
    // when the family has no objects.
    OracleResult shortest_object(const Density& rho) const;

    // ell(Gamma) at rho == 1: the minimal total usage of any object.
    double min_total_usage() const;

    // Full object list.  Throws GuardError when the family has more than
    // max_count objects.
    std::vector<UsageRow> enumerate(std::size_t max_count) const;

    std::string describe() const;

private:
    Family(FamilyKind kind, const Graph& g) : kind_(kind), graph_(&g) {}

    FamilyKind kind_;
    const Graph* graph_;
    int a_ = -1;
    int b_ = -1;
    std::vector<UsageRow> rows_;
};

// Label helpers shared by oracles and enumerators.
std::string path_label(const Graph& g, const std::vector<int>& vertices);
std::string edge_set_label(const Graph& g, const std::string& prefix,
                           const std::vector<int>& edges);

} // namespace pmod
