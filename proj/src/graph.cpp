#include "pmod/graph.hpp"
#include "pmod/errors.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace pmod {

Density Density::constant(int edge_count, double value, DensityRole r) {
    return Density(std::vector<double>(static_cast<size_t>(edge_count), value), r);
}

void Density::check(int edge_count, const char* what) const {
    if (size() != edge_count) {
        throw ParseError(std::string(what) + ": expected " + std::to_string(edge_count) +
                         " entries, got " + std::to_string(size()));
    }
    for (int e = 0; e < size(); ++e) {
        double x = values[static_cast<size_t>(e)];
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw ParseError(std::string(what) + ": entry " + std::to_string(e) +
                             " is " + std::to_string(x) + ", must be finite and >= 0");
        }
    }
}

int Graph::add_vertex(const std::string& label) {
    if (label.empty()) throw ParseError("vertex label must be non-empty");
    auto it = label_index_.find(label);
    if (it != label_index_.end()) return it->second;
    int idx = static_cast<int>(labels_.size());
    labels_.push_back(label);
    label_index_.emplace(label, idx);
    adjacency_.emplace_back();
    return idx;
}

int Graph::add_edge(const std::string& tail, const std::string& head, double weight) {
    // sequence the lookups: argument evaluation order would leave vertex
    // numbering compiler-dependent
    int u = add_vertex(tail);
    int v = add_vertex(head);
    return add_edge(u, v, weight);
}

int Graph::add_edge(int tail, int head, double weight) {
    int u = tail;
    int v = head;
    if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
        throw ParseError("edge endpoint index out of range");
    if (u == v) {
        throw ParseError("self loop at vertex '" + label(u) + "' is not allowed");
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
        throw ParseError("edge " + label(u) + "-" + label(v) + " has weight " +
                         std::to_string(weight) + ", must be finite and > 0");
    }
    int e = static_cast<int>(edges_.size());
    edges_.push_back(Edge{u, v, weight});
    adjacency_[static_cast<size_t>(u)].emplace_back(e, v);
    if (!directed_) adjacency_[static_cast<size_t>(v)].emplace_back(e, u);
    return e;
}

int Graph::find_vertex(const std::string& label) const {
    auto it = label_index_.find(label);
    return it == label_index_.end() ? -1 : it->second;
}

int Graph::vertex(const std::string& label) const {
    int v = find_vertex(label);
    if (v < 0) throw ParseError("unknown vertex '" + label + "'");
    return v;
}

std::string Graph::edge_key(int e) const {
    const Edge& ed = edge(e);
    int copy = 0;
    for (int i = 0; i < e; ++i) {
        if (edges_[static_cast<size_t>(i)].tail == ed.tail &&
            edges_[static_cast<size_t>(i)].head == ed.head) {
            ++copy;
        }
    }
    std::string key = label(ed.tail) + "-" + label(ed.head);
    if (copy > 0) key += "#" + std::to_string(copy);
    return key;
}

Density Graph::sigma() const {
    std::vector<double> w(edges_.size());
    for (size_t e = 0; e < edges_.size(); ++e) w[e] = edges_[e].weight;
    return Density(std::move(w));
}

double Graph::sigma_total() const {
    double t = 0.0;
    for (const Edge& e : edges_) t += e.weight;
    return t;
}

bool Graph::connected() const {
    int n = vertex_count();
    if (n <= 1) return true;
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    // Ignore orientation even for directed graphs.
    std::vector<std::vector<int>> und(static_cast<size_t>(n));
    for (const Edge& e : edges_) {
        und[static_cast<size_t>(e.tail)].push_back(e.head);
        und[static_cast<size_t>(e.head)].push_back(e.tail);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : und[static_cast<size_t>(v)]) {
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                ++count;
                q.push(w);
            }
        }
    }
    return count == n;
}

Graph Graph::reweighted(const Density& new_sigma) const {
    new_sigma.check(edge_count(), "weights");
    Graph g(directed_);
    for (int v = 0; v < vertex_count(); ++v) g.add_vertex(label(v));
    for (int e = 0; e < edge_count(); ++e) {
        const Edge& ed = edge(e);
        g.add_edge(label(ed.tail), label(ed.head), new_sigma[e]);
    }
    return g;
}

Graph Graph::from_edge_list(const std::string& text, bool directed) {
    Graph g(directed);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tail, head;
        if (!(ls >> tail)) continue; // blank line
        if (!(ls >> head)) {
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected 'tail head [weight]'");
        }
        double w = 1.0;
        std::string wtok;
        if (ls >> wtok) {
            try {
                size_t pos = 0;
                w = std::stod(wtok, &pos);
                if (pos != wtok.size()) throw std::invalid_argument(wtok);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) +
                                 ": bad weight '" + wtok + "'");
            }
        }
        std::string extra;
        if (ls >> extra) {
            throw ParseError("line " + std::to_string(lineno) +
                             ": unexpected token '" + extra + "'");
        }
        try {
            g.add_edge(tail, head, w);
        } catch (const ParseError& err) {
            throw ParseError("line " + std::to_string(lineno) + ": " + err.what());
        }
    }
    return g;
}

Graph Graph::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("graph json: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("graph json: expected an object");
    bool directed = false;
    if (doc.contains("directed")) {
        if (!doc["directed"].is_boolean()) {
            throw ParseError("graph json: 'directed' must be a boolean");
        }
        directed = doc["directed"].get<bool>();
    }
    if (!doc.contains("edges") || !doc["edges"].is_array()) {
        throw ParseError("graph json: missing 'edges' array");
    }
    Graph g(directed);
    int idx = 0;
    for (const auto& item : doc["edges"]) {
        if (!item.is_object() || !item.contains("u") || !item.contains("v")) {
            throw ParseError("graph json: edge " + std::to_string(idx) +
                             " must be an object with 'u' and 'v'");
        }
        auto as_label = [&](const nlohmann::json& j) -> std::string {
            if (j.is_string()) return j.get<std::string>();
            if (j.is_number_integer()) return std::to_string(j.get<long long>());
            throw ParseError("graph json: edge " + std::to_string(idx) +
                             " endpoint must be a string or integer");
        };
        double w = 1.0;
        if (item.contains("w")) {
            if (!item["w"].is_number()) {
                throw ParseError("graph json: edge " + std::to_string(idx) +
                                 " weight must be a number");
            }
            w = item["w"].get<double>();
        }
        try {
            g.add_edge(as_label(item["u"]), as_label(item["v"]), w);
        } catch (const ParseError& err) {
            throw ParseError("graph json: edge " + std::to_string(idx) + ": " + err.what());
        }
        ++idx;
    }
    return g;
}

Graph Graph::load(const std::string& text, const std::string& format, bool directed) {
    if (format == "edge-list") return from_edge_list(text, directed);
    if (format == "json") return from_json(text);
    throw ParseError("unknown graph format '" + format + "' (use 'edge-list' or 'json')");
}

PathResult shortest_path(const Graph& g, int a, int b, const Density& lengths) {
    lengths.check(g.edge_count(), "lengths");
    int n = g.vertex_count();
    if (a < 0 || a >= n || b < 0 || b >= n) throw ParseError("vertex index out of range");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<size_t>(n), inf);
    std::vector<int> via_edge(static_cast<size_t>(n), -1);
    std::vector<int> via_vertex(static_cast<size_t>(n), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[static_cast<size_t>(a)] = 0.0;
    heap.emplace(0.0, a);
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[static_cast<size_t>(v)]) continue;
        if (v == b) break;
        for (auto [e, w] : g.out_edges(v)) {
            double nd = d + lengths[e];
            if (nd < dist[static_cast<size_t>(w)]) {
                dist[static_cast<size_t>(w)] = nd;
                via_edge[static_cast<size_t>(w)] = e;
                via_vertex[static_cast<size_t>(w)] = v;
                heap.emplace(nd, w);
            }
        }
    }
    if (dist[static_cast<size_t>(b)] == inf) {
        throw FamilyEmptyError("no path from '" + g.label(a) + "' to '" + g.label(b) + "'");
    }
    PathResult r;
    r.length = dist[static_cast<size_t>(b)];
    for (int v = b; v != a; v = via_vertex[static_cast<size_t>(v)]) {
        r.edges.push_back(via_edge[static_cast<size_t>(v)]);
        r.vertices.push_back(v);
    }
    r.vertices.push_back(a);
    std::reverse(r.edges.begin(), r.edges.end());
    std::reverse(r.vertices.begin(), r.vertices.end());
    return r;
}

int hop_distance(const Graph& g, int a, int b) {
    PathResult r = shortest_path(g, a, b, Density::constant(g.edge_count(), 1.0));
    return static_cast<int>(r.edges.size());
}

namespace {

// Dinic max-flow on an explicit residual arc list.
struct FlowNetwork {
    struct Arc {
        int to;
        double cap;
        int rev;
        int edge_id; // original edge, -1 for reverse bookkeeping arcs
    };
    std::vector<std::vector<Arc>> arcs;
    std::vector<int> level, iter;

    explicit FlowNetwork(int n) : arcs(static_cast<size_t>(n)) {}

    void add(int u, int v, double cap_uv, double cap_vu, int edge_id) {
        Arc f{v, cap_uv, static_cast<int>(arcs[static_cast<size_t>(v)].size()), edge_id};
        Arc r{u, cap_vu, static_cast<int>(arcs[static_cast<size_t>(u)].size()), edge_id};
        arcs[static_cast<size_t>(u)].push_back(f);
        arcs[static_cast<size_t>(v)].push_back(r);
    }

    bool bfs(int s, int t) {
        level.assign(arcs.size(), -1);
        std::queue<int> q;
        level[static_cast<size_t>(s)] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const Arc& a : arcs[static_cast<size_t>(v)]) {
                if (a.cap > 1e-15 && level[static_cast<size_t>(a.to)] < 0) {
                    level[static_cast<size_t>(a.to)] = level[static_cast<size_t>(v)] + 1;
                    q.push(a.to);
                }
            }
        }
        return level[static_cast<size_t>(t)] >= 0;
    }

    double dfs(int v, int t, double f) {
        if (v == t) return f;
        for (int& i = iter[static_cast<size_t>(v)];
             i < static_cast<int>(arcs[static_cast<size_t>(v)].size()); ++i) {
            Arc& a = arcs[static_cast<size_t>(v)][static_cast<size_t>(i)];
            if (a.cap > 1e-15 &&
                level[static_cast<size_t>(v)] < level[static_cast<size_t>(a.to)]) {
                double d = dfs(a.to, t, std::min(f, a.cap));
                if (d > 0.0) {
                    a.cap -= d;
                    arcs[static_cast<size_t>(a.to)][static_cast<size_t>(a.rev)].cap += d;
                    return d;
                }
            }
        }
        return 0.0;
    }

    double max_flow(int s, int t) {
        double flow = 0.0;
        const double inf = std::numeric_limits<double>::infinity();
        while (bfs(s, t)) {
            iter.assign(arcs.size(), 0);
            double f;
            while ((f = dfs(s, t, inf)) > 0.0) flow += f;
        }
        return flow;
    }
};

} // namespace

CutResult min_cut(const Graph& g, int a, int b, const Density& capacities) {
    if (g.directed()) {
        throw UnsupportedError("min cut is implemented for undirected graphs only");
    }
    capacities.check(g.edge_count(), "capacities");
    if (a == b) throw ParseError("cut endpoints must differ");
    FlowNetwork net(g.vertex_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        net.add(ed.tail, ed.head, capacities[e], capacities[e], e);
    }
    net.max_flow(a, b);
    // Residual reachability from a gives a minimum-capacity cut.
    std::vector<char> side(static_cast<size_t>(g.vertex_count()), 0);
    std::queue<int> q;
    q.push(a);
    side[static_cast<size_t>(a)] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const auto& arc : net.arcs[static_cast<size_t>(v)]) {
            if (arc.cap > 1e-9 && !side[static_cast<size_t>(arc.to)]) {
                side[static_cast<size_t>(arc.to)] = 1;
                q.push(arc.to);
            }
        }
    }
    if (side[static_cast<size_t>(b)]) {
        throw Error("max-flow did not separate the endpoints");
    }
    auto crossing = [&](const std::vector<char>& s) {
        std::vector<int> out;
        for (int e = 0; e < g.edge_count(); ++e) {
            if (s[static_cast<size_t>(g.edge(e).tail)] !=
                s[static_cast<size_t>(g.edge(e).head)]) {
                out.push_back(e);
            }
        }
        return out;
    };
    auto component = [&](int seed, const std::vector<int>& removed_edges) {
        std::vector<char> removed(static_cast<size_t>(g.edge_count()), 0);
        for (int e : removed_edges) removed[static_cast<size_t>(e)] = 1;
        std::vector<char> in(static_cast<size_t>(g.vertex_count()), 0);
        std::queue<int> bq;
        bq.push(seed);
        in[static_cast<size_t>(seed)] = 1;
        while (!bq.empty()) {
            int v = bq.front();
            bq.pop();
            for (auto [e, w] : g.out_edges(v)) {
                if (removed[static_cast<size_t>(e)] || in[static_cast<size_t>(w)]) continue;
                in[static_cast<size_t>(w)] = 1;
                bq.push(w);
            }
        }
        return in;
    };
    // Shrink to an inclusion-minimal cut of the same capacity: first the
    // component of a inside the residual side (drops zero-capacity strays),
    // then the component of b on the far side.  After the second pass both
    // sides induce connected subgraphs, so the cut is minimal.
    std::vector<char> sa = component(a, crossing(side));
    std::vector<char> sb = component(b, crossing(sa));
    CutResult r;
    r.source_side.assign(static_cast<size_t>(g.vertex_count()), 0);
    for (int v = 0; v < g.vertex_count(); ++v) {
        r.source_side[static_cast<size_t>(v)] = sb[static_cast<size_t>(v)] ? 0 : 1;
    }
    r.edges = crossing(sb);
    if (r.edges.empty()) {
        throw FamilyEmptyError("vertices '" + g.label(a) + "' and '" + g.label(b) +
                               "' are already disconnected");
    }
    // Exact sum over the final cut, not the accumulated flow value.
    r.value = 0.0;
    for (int e : r.edges) r.value += capacities[e];
    return r;
}

double effective_resistance(const Graph& g, int a, int b) {
    if (g.directed()) {
        throw UnsupportedError("effective resistance requires an undirected graph");
    }
    if (!g.connected()) {
        throw FamilyEmptyError("effective resistance requires a connected graph");
    }
    if (a == b) return 0.0;
    int n = g.vertex_count();
    // Ground vertex b: solve the reduced Laplacian for the potential of a
    // under a unit current injection at a, extraction at b.
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n - 1, n - 1);
    auto reduced = [&](int v) { return v < b ? v : v - 1; };
    for (const Edge& e : g.edges()) {
        double c = e.weight;
        if (e.tail != b && e.head != b) {
            int i = reduced(e.tail), j = reduced(e.head);
            L(i, i) += c;
            L(j, j) += c;
            L(i, j) -= c;
            L(j, i) -= c;
        } else {
            int other = (e.tail == b) ? e.head : e.tail;
            L(reduced(other), reduced(other)) += c;
        }
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n - 1);
    rhs(reduced(a)) = 1.0;
    Eigen::VectorXd x = L.ldlt().solve(rhs);
    double residual = (L * x - rhs).norm() / rhs.norm();
    if (!(residual <= 1e-10)) {
        throw Error("effective resistance solve failed, residual " + std::to_string(residual));
    }
    return x(reduced(a));
}

TreeResult minimum_spanning_tree(const Graph& g, const Density& lengths) {
    if (g.directed()) {
        throw UnsupportedError("spanning trees require an undirected graph");
    }
    if (!g.connected() || g.vertex_count() == 0) {
        throw FamilyEmptyError("spanning trees require a connected graph");
    }
    lengths.check(g.edge_count(), "lengths");
    std::vector<int> order(static_cast<size_t>(g.edge_count()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return lengths[x] < lengths[y]; });
    std::vector<int> parent(static_cast<size_t>(g.vertex_count()));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    };
    TreeResult r;
    for (int e : order) {
        int ru = find(g.edge(e).tail), rv = find(g.edge(e).head);
        if (ru == rv) continue;
        parent[static_cast<size_t>(ru)] = rv;
        r.edges.push_back(e);
        r.total += lengths[e];
        if (static_cast<int>(r.edges.size()) == g.vertex_count() - 1) break;
    }
    std::sort(r.edges.begin(), r.edges.end());
    return r;
}

double spanning_tree_count(const Graph& g) {
    if (g.directed()) {
        throw UnsupportedError("spanning tree counts require an undirected graph");
    }
    if (!g.connected()) return 0.0;
    int n = g.vertex_count();
    if (n <= 1) return 1.0;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n - 1, n - 1);
    for (const Edge& e : g.edges()) {
        int u = e.tail, v = e.head;
        if (u < n - 1) L(u, u) += 1.0;
        if (v < n - 1) L(v, v) += 1.0;
        if (u < n - 1 && v < n - 1) {
            L(u, v) -= 1.0;
            L(v, u) -= 1.0;
        }
    }
    return std::round(L.determinant());
}

} // namespace pmod
