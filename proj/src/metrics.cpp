#include "pmod/metrics.hpp"
#include "pmod/errors.hpp"
#include "pmod/parallel.hpp"

#include <cmath>
#include <limits>

namespace pmod {

namespace {

struct PairModuli {
    std::vector<std::vector<double>> mod; // n x n, diagonal unused
    int solves = 0;
    bool all_converged = true;
};

PairModuli all_pair_moduli(const Graph& g, double p, const SolverOptions& options, int jobs) {
    if (g.directed()) throw UnsupportedError("metrics require an undirected graph");
    if (!g.connected()) throw FamilyEmptyError("metrics require a connected graph");
    int n = g.vertex_count();
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    std::vector<ModulusSolution> sols(pairs.size());
    parallel_for(static_cast<int>(pairs.size()), jobs, [&](int idx) {
        auto [i, j] = pairs[static_cast<size_t>(idx)];
        Family f = Family::connect(g, g.label(i), g.label(j));
        sols[static_cast<size_t>(idx)] = solve_modulus(f, p, options);
    });
    PairModuli out;
    out.mod.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    out.solves = static_cast<int>(pairs.size());
    for (size_t idx = 0; idx < pairs.size(); ++idx) {
        auto [i, j] = pairs[idx];
        out.mod[static_cast<size_t>(i)][static_cast<size_t>(j)] = sols[idx].value;
        out.mod[static_cast<size_t>(j)][static_cast<size_t>(i)] = sols[idx].value;
        out.all_converged = out.all_converged && sols[idx].converged;
    }
    return out;
}

MetricReport assemble(const Graph& g, double p, const PairModuli& pm, double expo,
                      const char* kind) {
    int n = g.vertex_count();
    MetricReport rep;
    rep.kind = kind;
    rep.p = p;
    rep.solves = pm.solves;
    rep.all_converged = pm.all_converged;
    for (int v = 0; v < n; ++v) rep.labels.push_back(g.label(v));
    rep.dist.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = std::pow(pm.mod[static_cast<size_t>(i)][static_cast<size_t>(j)], expo);
            rep.dist[static_cast<size_t>(i)][static_cast<size_t>(j)] = d;
            if (!(d > 0.0)) rep.offdiagonal_positive = false;
        }
    }
    rep.worst_triangle_slack = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            for (int c = 0; c < n; ++c) {
                if (c == a || c == b) continue;
                double slack = rep.dist[static_cast<size_t>(a)][static_cast<size_t>(c)] +
                               rep.dist[static_cast<size_t>(c)][static_cast<size_t>(b)] -
                               rep.dist[static_cast<size_t>(a)][static_cast<size_t>(b)];
                rep.worst_triangle_slack = std::min(rep.worst_triangle_slack, slack);
            }
        }
    }
    if (n < 3) rep.worst_triangle_slack = 0.0;
    // classical comparisons
    Density sigma = g.sigma();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double d = rep.dist[static_cast<size_t>(i)][static_cast<size_t>(j)];
            double r = effective_resistance(g, i, j);
            double h = static_cast<double>(hop_distance(g, i, j));
            double mc = min_cut(g, i, j, sigma).value;
            rep.max_rel_dev_resistance =
                std::max(rep.max_rel_dev_resistance, std::abs(d - r) / r);
            rep.max_rel_dev_hops = std::max(rep.max_rel_dev_hops, std::abs(d - h) / h);
            rep.max_rel_dev_inv_mincut =
                std::max(rep.max_rel_dev_inv_mincut, std::abs(d - 1.0 / mc) * mc);
        }
    }
    return rep;
}

} // namespace

MetricReport delta_p_matrix(const Graph& g, double p, const SolverOptions& options, int jobs) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw ParseError("delta_p needs finite p in (1, inf)");
    }
    double q = conjugate_exponent(p);
    PairModuli pm = all_pair_moduli(g, p, options, jobs);
    return assemble(g, p, pm, -q / p, "delta_p");
}

MetricReport mod_inverse_metric(const Graph& g, double p, const SolverOptions& options,
                                int jobs) {
    if (!(p > 1.0) || !(p < 2.0)) {
        throw ParseError("the inverse-modulus metric needs p in (1, 2)");
    }
    PairModuli pm = all_pair_moduli(g, p, options, jobs);
    return assemble(g, p, pm, -1.0, "mod_inverse");
}

UltrametricReport ultrametric_check(const Graph& g) {
    if (g.directed()) throw UnsupportedError("ultrametric check requires an undirected graph");
    if (!g.connected()) throw FamilyEmptyError("ultrametric check requires a connected graph");
    int n = g.vertex_count();
    UltrametricReport rep;
    Density sigma = g.sigma();
    for (int v = 0; v < n; ++v) rep.labels.push_back(g.label(v));
    rep.d_mc.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double d = 1.0 / min_cut(g, i, j, sigma).value;
            rep.d_mc[static_cast<size_t>(i)][static_cast<size_t>(j)] = d;
            rep.d_mc[static_cast<size_t>(j)][static_cast<size_t>(i)] = d;
        }
    }
    rep.worst_slack = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            for (int c = 0; c < n; ++c) {
                if (c == a || c == b) continue;
                double slack = std::max(rep.d_mc[static_cast<size_t>(a)][static_cast<size_t>(c)],
                                        rep.d_mc[static_cast<size_t>(c)][static_cast<size_t>(b)]) -
                               rep.d_mc[static_cast<size_t>(a)][static_cast<size_t>(b)];
                rep.worst_slack = std::min(rep.worst_slack, slack);
            }
        }
    }
    if (n < 3) rep.worst_slack = 0.0;
    rep.pass = rep.worst_slack >= -1e-12;
    return rep;
}

SnowflakeWitness anti_snowflake_witness(double p, double epsilon, const SolverOptions& options) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw ParseError("snowflake witness needs finite p in (1, inf)");
    }
    if (epsilon < 0.0) throw ParseError("epsilon must be >= 0");
    Graph g;
    g.add_edge("a", "b", 1.0);
    g.add_edge("b", "c", 1.0);
    double q = conjugate_exponent(p);
    auto dist = [&](const char* u, const char* v) {
        Family f = Family::connect(g, u, v);
        return std::pow(solve_modulus(f, p, options).value, -q / p);
    };
    SnowflakeWitness w;
    w.p = p;
    w.epsilon = epsilon;
    w.graph_description = "path a-b-c with unit weights";
    w.triple = {"a", "b", "c"};
    w.d_ab = dist("a", "b");
    w.d_bc = dist("b", "c");
    w.d_ac = dist("a", "c");
    double s = 1.0 + epsilon;
    w.lhs = std::pow(w.d_ac, s);
    w.rhs = std::pow(w.d_ab, s) + std::pow(w.d_bc, s);
    w.violated = w.lhs > w.rhs + 1e-12;
    return w;
}

} // namespace pmod
