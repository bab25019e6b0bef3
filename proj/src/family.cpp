#include "pmod/family.hpp"
#include "pmod/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

namespace pmod {

double UsageRow::dot(const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& [e, n] : entries) s += n * x[static_cast<size_t>(e)];
    return s;
}

double UsageRow::min_positive() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& [e, n] : entries) m = std::min(m, n);
    return m;
}

bool UsageRow::has_edge(int e) const {
    for (const auto& [id, n] : entries) {
        if (id == e) return true;
        if (id > e) break;
    }
    return false;
}

double UsageRow::usage(int e) const {
    for (const auto& [id, n] : entries) {
        if (id == e) return n;
        if (id > e) break;
    }
    return 0.0;
}

std::vector<double> UsageRow::dense(int edge_count) const {
    std::vector<double> v(static_cast<size_t>(edge_count), 0.0);
    for (const auto& [e, n] : entries) v[static_cast<size_t>(e)] = n;
    return v;
}

void UsageRow::normalize(int edge_count) {
    std::map<int, double> merged;
    for (const auto& [e, n] : entries) {
        if (e < 0 || e >= edge_count) {
            throw ParseError("usage row '" + label + "': edge id " + std::to_string(e) +
                             " out of range");
        }
        if (!std::isfinite(n) || n < 0.0) {
            throw ParseError("usage row '" + label + "': usage must be finite and >= 0");
        }
        merged[e] += n;
    }
    entries.clear();
    for (const auto& [e, n] : merged) {
        if (n > 0.0) entries.emplace_back(e, n);
    }
    if (entries.empty()) {
        throw FamilyEmptyError("usage row '" + label + "' has no positive usage");
    }
}

bool UsageRow::same_entries(const UsageRow& other, double tol) const {
    if (entries.size() != other.entries.size()) return false;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first != other.entries[i].first) return false;
        if (std::abs(entries[i].second - other.entries[i].second) > tol) return false;
    }
    return true;
}

std::string path_label(const Graph& g, const std::vector<int>& vertices) {
    std::string s;
    for (size_t i = 0; i < vertices.size(); ++i) {
        if (i) s += "-";
        s += g.label(vertices[i]);
    }
    return s;
}

std::string edge_set_label(const Graph& g, const std::string& prefix,
                           const std::vector<int>& edges) {
    std::string s = prefix + "(";
    std::vector<int> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) {
        if (i) s += ",";
        s += g.edge_key(sorted[i]);
    }
    return s + ")";
}

namespace {

UsageRow indicator_row(const std::vector<int>& edges, std::string label) {
    UsageRow r;
    std::vector<int> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    for (int e : sorted) r.entries.emplace_back(e, 1.0);
    r.label = std::move(label);
    return r;
}

void require_endpoints_distinct(const Graph& g, int a, int b) {
    if (a == b) {
        throw ParseError("family endpoints must be distinct, got '" + g.label(a) + "' twice");
    }
}

} // namespace

Family Family::connect(const Graph& g, const std::string& a, const std::string& b) {
    Family f(FamilyKind::connect, g);
    f.a_ = g.vertex(a);
    f.b_ = g.vertex(b);
    require_endpoints_distinct(g, f.a_, f.b_);
    return f;
}

Family Family::cut(const Graph& g, const std::string& a, const std::string& b) {
    if (g.directed()) {
        throw UnsupportedError("cut families are implemented for undirected graphs only");
    }
    Family f(FamilyKind::cut, g);
    f.a_ = g.vertex(a);
    f.b_ = g.vertex(b);
    require_endpoints_distinct(g, f.a_, f.b_);
    return f;
}

Family Family::spanning_trees(const Graph& g) {
    if (g.directed()) {
        throw UnsupportedError("spanning tree families require an undirected graph");
    }
    if (g.vertex_count() < 2 || !g.connected()) {
        throw FamilyEmptyError("spanning tree family needs a connected graph with >= 2 vertices");
    }
    return Family(FamilyKind::spanning_tree, g);
}

Family Family::explicit_rows(const Graph& g, std::vector<UsageRow> rows) {
    if (rows.empty()) throw FamilyEmptyError("explicit family has no rows");
    Family f(FamilyKind::explicit_rows, g);
    int idx = 0;
    for (UsageRow& r : rows) {
        if (r.label.empty()) r.label = "row" + std::to_string(idx);
        r.normalize(g.edge_count());
        ++idx;
    }
    f.rows_ = std::move(rows);
    return f;
}

Family Family::from_json(const Graph& g, const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("family json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) {
        throw ParseError("family json: expected {\"rows\": [...]}");
    }
    // Edge keys resolve through the graph's canonical key strings.
    std::map<std::string, int> key_to_edge;
    for (int e = 0; e < g.edge_count(); ++e) key_to_edge[g.edge_key(e)] = e;
    std::vector<UsageRow> rows;
    int idx = 0;
    for (const auto& item : doc["rows"]) {
        if (!item.is_object() || !item.contains("edges") || !item["edges"].is_object()) {
            throw ParseError("family json: row " + std::to_string(idx) +
                             " must be an object with an 'edges' map");
        }
        UsageRow r;
        if (item.contains("label")) {
            if (!item["label"].is_string()) {
                throw ParseError("family json: row " + std::to_string(idx) +
                                 " label must be a string");
            }
            r.label = item["label"].get<std::string>();
        }
        for (const auto& [key, val] : item["edges"].items()) {
            auto it = key_to_edge.find(key);
            if (it == key_to_edge.end()) {
                throw ParseError("family json: row " + std::to_string(idx) +
                                 " references unknown edge '" + key + "'");
            }
            if (!val.is_number()) {
                throw ParseError("family json: row " + std::to_string(idx) +
                                 " usage for '" + key + "' must be a number");
            }
            r.entries.emplace_back(it->second, val.get<double>());
        }
        rows.push_back(std::move(r));
        ++idx;
    }
    return explicit_rows(g, std::move(rows));
}

Family Family::from_spec(const Graph& g, const std::string& spec) {
    auto endpoints = [&](const std::string& args, const char* kind) {
        auto comma = args.find(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 == args.size()) {
            throw ParseError(std::string(kind) + " family spec needs 'a,b' endpoints, got '" +
                             args + "'");
        }
        return std::make_pair(args.substr(0, comma), args.substr(comma + 1));
    };
    if (spec.rfind("connect:", 0) == 0) {
        auto [a, b] = endpoints(spec.substr(8), "connect");
        return connect(g, a, b);
    }
    if (spec.rfind("cut:", 0) == 0) {
        auto [a, b] = endpoints(spec.substr(4), "cut");
        return cut(g, a, b);
    }
    if (spec == "spanning-tree") return spanning_trees(g);
    if (spec.rfind("explicit:", 0) == 0) return from_json(g, spec.substr(9));
    throw ParseError("unknown family spec '" + spec +
                     "' (use connect:a,b | cut:a,b | spanning-tree | explicit:<json>)");
}

const std::vector<UsageRow>& Family::rows() const {
    if (kind_ != FamilyKind::explicit_rows) {
        throw UnsupportedError("rows() is only available for explicit families");
    }
    return rows_;
}

Family Family::rebind(const Graph& g) const {
    if (g.vertex_count() != graph_->vertex_count() ||
        g.edge_count() != graph_->edge_count() || g.directed() != graph_->directed()) {
        throw ParseError("rebind target graph has a different shape");
    }
    Family f(kind_, g);
    f.a_ = a_;
    f.b_ = b_;
    f.rows_ = rows_;
    return f;
}

double Family::n_min() const {
    switch (kind_) {
    case FamilyKind::connect:
    case FamilyKind::cut:
    case FamilyKind::spanning_tree:
        return 1.0;
    case FamilyKind::explicit_rows: {
        double m = std::numeric_limits<double>::infinity();
        for (const UsageRow& r : rows_) m = std::min(m, r.min_positive());
        return m;
    }
    }
    throw Error("unreachable");
}

Family::OracleResult Family::shortest_object(const Density& rho) const {
    rho.check(graph_->edge_count(), "rho");
    OracleResult out;
    switch (kind_) {
    case FamilyKind::connect: {
        PathResult pr = shortest_path(*graph_, a_, b_, rho);
        out.row = indicator_row(pr.edges, path_label(*graph_, pr.vertices));
        out.value = pr.length;
        return out;
    }
    case FamilyKind::cut: {
        CutResult cr = min_cut(*graph_, a_, b_, rho);
        out.row = indicator_row(cr.edges, edge_set_label(*graph_, "cut", cr.edges));
        out.value = cr.value;
        return out;
    }
    case FamilyKind::spanning_tree: {
        TreeResult tr = minimum_spanning_tree(*graph_, rho);
        out.row = indicator_row(tr.edges, edge_set_label(*graph_, "tree", tr.edges));
        out.value = tr.total;
        return out;
    }
    case FamilyKind::explicit_rows: {
        double best = std::numeric_limits<double>::infinity();
        const UsageRow* arg = nullptr;
        for (const UsageRow& r : rows_) {
            double v = r.dot(rho);
            if (v < best) {
                best = v;
                arg = &r;
            }
        }
        if (!arg) throw FamilyEmptyError("explicit family has no rows");
        out.row = *arg;
        out.value = best;
        return out;
    }
    }
    throw Error("unreachable");
}

double Family::min_total_usage() const {
    return shortest_object(Density::constant(graph_->edge_count(), 1.0)).value;
}

namespace {

// All simple a-b paths by depth-first search.
void enumerate_paths(const Graph& g, int a, int b, std::size_t max_count,
                     std::vector<UsageRow>& out) {
    std::vector<int> edge_stack, vertex_stack{a};
    std::vector<char> visited(static_cast<size_t>(g.vertex_count()), 0);
    visited[static_cast<size_t>(a)] = 1;
    std::function<void(int)> dfs = [&](int v) {
        if (v == b) {
            if (out.size() >= max_count) {
                throw GuardError("connect family exceeds " + std::to_string(max_count) +
                                 " objects");
            }
            out.push_back(indicator_row(edge_stack, path_label(g, vertex_stack)));
            return;
        }
        for (auto [e, w] : g.out_edges(v)) {
            if (visited[static_cast<size_t>(w)]) continue;
            visited[static_cast<size_t>(w)] = 1;
            edge_stack.push_back(e);
            vertex_stack.push_back(w);
            dfs(w);
            vertex_stack.pop_back();
            edge_stack.pop_back();
            visited[static_cast<size_t>(w)] = 0;
        }
    };
    dfs(a);
}

// Vertex component of `seed` in the graph with the given edges removed.
std::vector<char> component_of(const Graph& g, int seed, const std::vector<char>& removed) {
    std::vector<char> in(static_cast<size_t>(g.vertex_count()), 0);
    std::queue<int> q;
    q.push(seed);
    in[static_cast<size_t>(seed)] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int e = 0; e < g.edge_count(); ++e) {
            if (removed[static_cast<size_t>(e)]) continue;
            const Edge& ed = g.edge(e);
            int other;
            if (ed.tail == v) other = ed.head;
            else if (ed.head == v) other = ed.tail;
            else continue;
            if (!in[static_cast<size_t>(other)]) {
                in[static_cast<size_t>(other)] = 1;
                q.push(other);
            }
        }
    }
    return in;
}

// Minimal a-b cuts: delta(S) where S splits the component containing the
// endpoints, a in S, b not in S, and both sides induce connected subgraphs.
// These are exactly the inclusion-minimal separating edge sets; vertices in
// other components never contribute edges.
void enumerate_minimal_cuts(const Graph& g, int a, int b, std::size_t max_count,
                            std::vector<UsageRow>& out) {
    int n = g.vertex_count();
    std::vector<char> none(static_cast<size_t>(g.edge_count()), 0);
    std::vector<char> comp = component_of(g, a, none);
    if (!comp[static_cast<size_t>(b)]) {
        throw FamilyEmptyError("vertices '" + g.label(a) + "' and '" + g.label(b) +
                               "' are already disconnected");
    }
    std::vector<int> rest;
    for (int v = 0; v < n; ++v) {
        if (comp[static_cast<size_t>(v)] && v != a && v != b) rest.push_back(v);
    }
    if (rest.size() > 24) {
        throw GuardError("cut enumeration needs at most 26 vertices in the component");
    }
    for (std::uint64_t mask = 0; mask < (1ull << rest.size()); ++mask) {
        std::vector<char> side(static_cast<size_t>(n), 0);
        side[static_cast<size_t>(a)] = 1;
        for (size_t i = 0; i < rest.size(); ++i) {
            if (mask & (1ull << i)) side[static_cast<size_t>(rest[i])] = 1;
        }
        std::vector<int> cut_edges;
        std::vector<char> removed(static_cast<size_t>(g.edge_count()), 0);
        for (int e = 0; e < g.edge_count(); ++e) {
            const Edge& ed = g.edge(e);
            if (side[static_cast<size_t>(ed.tail)] != side[static_cast<size_t>(ed.head)]) {
                cut_edges.push_back(e);
                removed[static_cast<size_t>(e)] = 1;
            }
        }
        if (cut_edges.empty()) continue;
        std::vector<char> ca = component_of(g, a, removed);
        std::vector<char> cb = component_of(g, b, removed);
        bool minimal = true;
        for (int v = 0; v < n && minimal; ++v) {
            if (!comp[static_cast<size_t>(v)]) continue;
            if (side[static_cast<size_t>(v)] && !ca[static_cast<size_t>(v)]) minimal = false;
            if (!side[static_cast<size_t>(v)] && !cb[static_cast<size_t>(v)]) minimal = false;
        }
        if (!minimal) continue;
        if (out.size() >= max_count) {
            throw GuardError("cut family exceeds " + std::to_string(max_count) + " objects");
        }
        out.push_back(indicator_row(cut_edges, edge_set_label(g, "cut", cut_edges)));
    }
    if (out.empty()) throw Error("no minimal cut found in a connected component");
}

void enumerate_spanning_trees(const Graph& g, std::size_t max_count,
                              std::vector<UsageRow>& out) {
    double count = spanning_tree_count(g);
    if (count > static_cast<double>(max_count)) {
        throw GuardError("spanning tree family has " + std::to_string(count) +
                         " objects, more than " + std::to_string(max_count));
    }
    int n = g.vertex_count(), m = g.edge_count();
    int k = n - 1;
    if (k == 0 || m < k) throw FamilyEmptyError("graph has no spanning tree");
    // All k-subsets of edges, kept when acyclic and spanning.
    std::vector<int> pick(static_cast<size_t>(k));
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
            std::vector<int> parent(static_cast<size_t>(n));
            for (int v = 0; v < n; ++v) parent[static_cast<size_t>(v)] = v;
            std::function<int(int)> find = [&](int v) {
                while (parent[static_cast<size_t>(v)] != v) v = parent[static_cast<size_t>(v)];
                return v;
            };
            int merges = 0;
            for (int e : pick) {
                int ru = find(g.edge(e).tail), rv = find(g.edge(e).head);
                if (ru == rv) return;
                parent[static_cast<size_t>(ru)] = rv;
                ++merges;
            }
            if (merges == n - 1) {
                out.push_back(indicator_row(pick, edge_set_label(g, "tree", pick)));
            }
            return;
        }
        for (int e = start; e <= m - (k - depth); ++e) {
            pick[static_cast<size_t>(depth)] = e;
            rec(e + 1, depth + 1);
        }
    };
    rec(0, 0);
}

} // namespace

std::vector<UsageRow> Family::enumerate(std::size_t max_count) const {
    std::vector<UsageRow> out;
    switch (kind_) {
    case FamilyKind::connect:
        enumerate_paths(*graph_, a_, b_, max_count, out);
        if (out.empty()) {
            throw FamilyEmptyError("no path from '" + graph_->label(a_) + "' to '" +
                                   graph_->label(b_) + "'");
        }
        return out;
    case FamilyKind::cut:
        enumerate_minimal_cuts(*graph_, a_, b_, max_count, out);
        return out;
    case FamilyKind::spanning_tree:
        enumerate_spanning_trees(*graph_, max_count, out);
        return out;
    case FamilyKind::explicit_rows:
        if (rows_.size() > max_count) {
            throw GuardError("explicit family has " + std::to_string(rows_.size()) +
                             " rows, more than " + std::to_string(max_count));
        }
        return rows_;
    }
    throw Error("unreachable");
}

std::string Family::describe() const {
    switch (kind_) {
    case FamilyKind::connect:
        return "connect(" + graph_->label(a_) + "," + graph_->label(b_) + ")";
    case FamilyKind::cut:
        return "cut(" + graph_->label(a_) + "," + graph_->label(b_) + ")";
    case FamilyKind::spanning_tree:
        return "spanning-tree";
    case FamilyKind::explicit_rows:
        return "explicit[" + std::to_string(rows_.size()) + " rows]";
    }
    throw Error("unreachable");
}

} // namespace pmod
