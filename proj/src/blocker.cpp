#include "pmod/blocker.hpp"
#include "pmod/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <queue>

namespace pmod {

const char* provenance_name(VertexProvenance p) {
    switch (p) {
    case VertexProvenance::enumerated: return "enumerated";
    case VertexProvenance::analytic_cut: return "analytic-cut";
    case VertexProvenance::feasible_partition: return "feasible-partition";
    }
    return "?";
}

namespace {

constexpr int kMaxEdges = 12;
constexpr std::size_t kMaxObjects = 20;
constexpr double kPivotTol = 1e-9;
constexpr double kDedupTol = 1e-9;

// Next k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<int>& c, int n) {
    int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[static_cast<size_t>(i)] < n - (k - i)) {
            ++c[static_cast<size_t>(i)];
            for (int j = i + 1; j < k; ++j) {
                c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
            }
            return true;
        }
    }
    return false;
}

} // namespace

std::vector<BlockerVertex> enumerate_blocker_vertices(const Family& f) {
    const Graph& g = f.graph();
    int m = g.edge_count();
    if (m > kMaxEdges) {
        throw GuardError("blocker vertex enumeration needs at most " +
                         std::to_string(kMaxEdges) + " edges, graph has " + std::to_string(m));
    }
    std::vector<UsageRow> rows = f.enumerate(kMaxObjects);
    // duplicate rows only duplicate work
    {
        std::vector<UsageRow> uniq;
        for (UsageRow& r : rows) {
            bool seen = false;
            for (const UsageRow& u : uniq) {
                if (u.same_entries(r)) { seen = true; break; }
            }
            if (!seen) uniq.push_back(std::move(r));
        }
        rows = std::move(uniq);
    }
    int R = static_cast<int>(rows.size());
    std::vector<std::vector<double>> N(static_cast<size_t>(R));
    for (int i = 0; i < R; ++i) N[static_cast<size_t>(i)] = rows[static_cast<size_t>(i)].dense(m);

    std::vector<BlockerVertex> verts;
    auto try_add = [&](std::vector<double> x) {
        for (double& v : x) {
            if (v < 0.0) {
                if (v < -kPivotTol) return;
                v = 0.0;
            }
        }
        for (int i = 0; i < R; ++i) {
            double dot = 0.0;
            for (int e = 0; e < m; ++e) dot += N[static_cast<size_t>(i)][static_cast<size_t>(e)] * x[static_cast<size_t>(e)];
            if (dot < 1.0 - 1e-9) return;
        }
        for (const BlockerVertex& v : verts) {
            double dev = 0.0;
            for (int e = 0; e < m; ++e) dev = std::max(dev, std::abs(v.coords[static_cast<size_t>(e)] - x[static_cast<size_t>(e)]));
            if (dev <= kDedupTol) return;
        }
        BlockerVertex v;
        v.coords = std::move(x);
        v.provenance = VertexProvenance::enumerated;
        v.label = "vertex" + std::to_string(verts.size());
        verts.push_back(std::move(v));
    };

    // Basic solutions: k tight rows T and k free coordinates S (the other
    // m-k are pinned to zero).  When N[T][:,S] is invertible the active set
    // {rows T, coordinate planes outside S} has rank m, so every feasible
    // candidate below is an extreme point; conversely every extreme point
    // has such a basis among its tight constraints.
    int kmax = std::min(m, R);
    for (int k = 1; k <= kmax; ++k) {
        std::vector<int> T(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) T[static_cast<size_t>(i)] = i;
        do {
            std::vector<int> S(static_cast<size_t>(k));
            for (int i = 0; i < k; ++i) S[static_cast<size_t>(i)] = i;
            do {
                Eigen::MatrixXd A(k, k);
                for (int r = 0; r < k; ++r) {
                    for (int c = 0; c < k; ++c) {
                        A(r, c) = N[static_cast<size_t>(T[static_cast<size_t>(r)])]
                                   [static_cast<size_t>(S[static_cast<size_t>(c)])];
                    }
                }
                Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
                lu.setThreshold(kPivotTol);
                if (!lu.isInvertible()) continue;
                Eigen::VectorXd xs = lu.solve(Eigen::VectorXd::Ones(k));
                std::vector<double> x(static_cast<size_t>(m), 0.0);
                for (int c = 0; c < k; ++c) x[static_cast<size_t>(S[static_cast<size_t>(c)])] = xs(c);
                try_add(std::move(x));
            } while (next_combination(S, m));
        } while (next_combination(T, R));
    }
    if (verts.empty()) throw Error("admissible set has no extreme points");
    return verts;
}

std::vector<FeasiblePartition> enumerate_feasible_partitions(const Graph& g) {
    if (g.directed()) {
        throw UnsupportedError("feasible partitions require an undirected graph");
    }
    if (!g.connected() || g.vertex_count() < 2) {
        throw FamilyEmptyError("feasible partitions require a connected graph with >= 2 vertices");
    }
    int n = g.vertex_count();
    if (n > 10) {
        throw GuardError("feasible partition enumeration needs at most 10 vertices, graph has " +
                         std::to_string(n));
    }
    std::vector<FeasiblePartition> out;
    // Restricted growth strings enumerate set partitions once each.
    std::vector<int> a(static_cast<size_t>(n), 0);
    auto emit = [&]() {
        int k = 1 + *std::max_element(a.begin(), a.end());
        if (k < 2) return;
        // every part must induce a connected subgraph
        for (int part = 0; part < k; ++part) {
            int seed = -1, size = 0;
            for (int v = 0; v < n; ++v) {
                if (a[static_cast<size_t>(v)] == part) {
                    if (seed < 0) seed = v;
                    ++size;
                }
            }
            std::vector<char> in(static_cast<size_t>(n), 0);
            std::queue<int> q;
            q.push(seed);
            in[static_cast<size_t>(seed)] = 1;
            int reached = 1;
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                for (auto [e, w] : g.out_edges(v)) {
                    if (a[static_cast<size_t>(w)] == part && !in[static_cast<size_t>(w)]) {
                        in[static_cast<size_t>(w)] = 1;
                        ++reached;
                        q.push(w);
                    }
                }
            }
            if (reached != size) return;
        }
        FeasiblePartition p;
        p.part_of.assign(a.begin(), a.end());
        p.part_count = k;
        p.coords.assign(static_cast<size_t>(g.edge_count()), 0.0);
        for (int e = 0; e < g.edge_count(); ++e) {
            if (a[static_cast<size_t>(g.edge(e).tail)] != a[static_cast<size_t>(g.edge(e).head)]) {
                p.cut_edges.push_back(e);
                p.coords[static_cast<size_t>(e)] = 1.0 / (k - 1);
            }
        }
        for (int part = 0; part < k; ++part) {
            if (part) p.label += "|";
            bool first = true;
            for (int v = 0; v < n; ++v) {
                if (a[static_cast<size_t>(v)] != part) continue;
                if (!first) p.label += ",";
                p.label += g.label(v);
                first = false;
            }
        }
        out.push_back(std::move(p));
    };
    // iterative restricted-growth enumeration
    std::vector<int> maxp(static_cast<size_t>(n), 0);
    int i = 1;
    a[0] = 0;
    maxp[0] = 0;
    while (i > 0) {
        if (i == n) {
            emit();
            --i;
            ++a[static_cast<size_t>(i)];
        } else if (a[static_cast<size_t>(i)] > maxp[static_cast<size_t>(i - 1)] + 1) {
            a[static_cast<size_t>(i)] = 0;
            --i;
            if (i > 0) ++a[static_cast<size_t>(i)];
        } else {
            maxp[static_cast<size_t>(i)] =
                std::max(maxp[static_cast<size_t>(i - 1)], a[static_cast<size_t>(i)]);
            ++i;
            if (i < n) a[static_cast<size_t>(i)] = 0;
        }
    }
    return out;
}

Family blocker_family(const Family& f, const Graph& target) {
    const Graph& g = f.graph();
    if (target.edge_count() != g.edge_count() || target.vertex_count() != g.vertex_count()) {
        throw ParseError("blocker target graph has a different shape");
    }
    switch (f.kind()) {
    case FamilyKind::connect:
        return Family::cut(target, g.label(f.endpoint_a()), g.label(f.endpoint_b()));
    case FamilyKind::cut:
        return Family::connect(target, g.label(f.endpoint_a()), g.label(f.endpoint_b()));
    case FamilyKind::spanning_tree: {
        std::vector<FeasiblePartition> parts = enumerate_feasible_partitions(g);
        std::vector<UsageRow> rows;
        rows.reserve(parts.size());
        for (const FeasiblePartition& p : parts) {
            UsageRow r;
            r.label = p.label;
            for (int e : p.cut_edges) r.entries.emplace_back(e, p.coords[static_cast<size_t>(e)]);
            rows.push_back(std::move(r));
        }
        return Family::explicit_rows(target, std::move(rows));
    }
    case FamilyKind::explicit_rows: {
        std::vector<BlockerVertex> verts = enumerate_blocker_vertices(f);
        std::vector<UsageRow> rows;
        rows.reserve(verts.size());
        for (const BlockerVertex& v : verts) {
            UsageRow r;
            r.label = v.label;
            for (int e = 0; e < g.edge_count(); ++e) {
                if (v.coords[static_cast<size_t>(e)] > 0.0) {
                    r.entries.emplace_back(e, v.coords[static_cast<size_t>(e)]);
                }
            }
            rows.push_back(std::move(r));
        }
        return Family::explicit_rows(target, std::move(rows));
    }
    }
    throw Error("unreachable");
}

} // namespace pmod
