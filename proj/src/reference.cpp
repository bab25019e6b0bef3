#include "pmod/reference.hpp"

#include "pmod/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace pmod {

double brute_min_cut(const Graph& g, int a, int b) {
    int n = g.vertex_count();
    if (n > 24) throw GuardError("brute-force min cut is limited to 24 vertices");
    if (a == b) throw ParseError("cut endpoints must differ");
    double best = std::numeric_limits<double>::infinity();
    // Fix a on the 0 side; enumerate the remaining n-1 memberships.
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (v != a) rest.push_back(v);
    for (std::uint64_t mask = 0; mask < (1ull << rest.size()); ++mask) {
        std::vector<char> side(static_cast<std::size_t>(n), 0);
        for (std::size_t i = 0; i < rest.size(); ++i)
            if (mask & (1ull << i)) side[static_cast<std::size_t>(rest[i])] = 1;
        if (side[static_cast<std::size_t>(b)] == 0) continue;
        double cut = 0.0;
        for (int e = 0; e < g.edge_count(); ++e) {
            const Edge& ed = g.edge(e);
            if (side[static_cast<std::size_t>(ed.tail)] != side[static_cast<std::size_t>(ed.head)])
                cut += ed.weight;
        }
        best = std::min(best, cut);
    }
    return best;
}

namespace {

struct BarrierProblem {
    Eigen::MatrixXd N; // K x m
    Eigen::VectorXd sigma;
    double p = 2.0;

    double energy(const Eigen::VectorXd& rho) const {
        double s = 0.0;
        for (int e = 0; e < rho.size(); ++e) s += sigma(e) * std::pow(rho(e), p);
        return s;
    }

    // t * energy - sum log(N rho - 1) - sum log rho
    double value(double t, const Eigen::VectorXd& rho, const Eigen::VectorXd& slack) const {
        double v = t * energy(rho);
        for (int k = 0; k < slack.size(); ++k) v -= std::log(slack(k));
        for (int e = 0; e < rho.size(); ++e) v -= std::log(rho(e));
        return v;
    }
};

} // namespace

BarrierResult barrier_modulus(const std::vector<UsageRow>& rows, const std::vector<double>& sigma,
                              double p, double tol_gap) {
    if (rows.empty()) throw FamilyEmptyError("barrier solver needs at least one row");
    if (!(p >= 1.0) || std::isinf(p))
        throw ParseError("barrier solver requires finite p >= 1");
    const int m = static_cast<int>(sigma.size());
    const int K = static_cast<int>(rows.size());

    BarrierProblem prob;
    prob.p = p;
    prob.sigma = Eigen::Map<const Eigen::VectorXd>(sigma.data(), m);
    prob.N = Eigen::MatrixXd::Zero(K, m);
    double n_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k)
        for (const auto& [e, v] : rows[static_cast<std::size_t>(k)].entries) {
            if (e < 0 || e >= m) throw ParseError("row references an edge out of range");
            prob.N(k, e) = v;
            n_min = std::min(n_min, v);
        }

    // rho = 2/n_min is strictly feasible: every row sum is >= n_min.
    Eigen::VectorXd rho = Eigen::VectorXd::Constant(m, 2.0 / n_min);
    BarrierResult res;
    const double ineq = static_cast<double>(K + m);
    double t = 1.0;

    for (int outer = 0; outer < 64; ++outer) {
        for (int it = 0; it < 200; ++it) {
            Eigen::VectorXd slack = prob.N * rho - Eigen::VectorXd::Ones(K);
            Eigen::VectorXd grad = Eigen::VectorXd::Zero(m);
            Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m, m);
            for (int e = 0; e < m; ++e) {
                grad(e) = t * p * prob.sigma(e) * std::pow(rho(e), p - 1.0) - 1.0 / rho(e);
                hess(e, e) = t * p * (p - 1.0) * prob.sigma(e) * std::pow(rho(e), p - 2.0) +
                             1.0 / (rho(e) * rho(e));
            }
            for (int k = 0; k < K; ++k) {
                grad -= prob.N.row(k).transpose() / slack(k);
                hess += prob.N.row(k).transpose() * prob.N.row(k) / (slack(k) * slack(k));
            }
            Eigen::VectorXd d = hess.ldlt().solve(-grad);
            double decrement = -grad.dot(d);
            if (!(decrement > 0.0)) break;
            if (decrement * 0.5 < 1e-12) break;

            // Largest step keeping rho and the slacks strictly positive.
            double alpha = 1.0;
            Eigen::VectorXd nd = prob.N * d;
            for (int e = 0; e < m; ++e)
                if (d(e) < 0.0) alpha = std::min(alpha, -0.99 * rho(e) / d(e));
            for (int k = 0; k < K; ++k)
                if (nd(k) < 0.0) alpha = std::min(alpha, -0.99 * slack(k) / nd(k));

            double f0 = prob.value(t, rho, slack);
            int halvings = 0;
            while (halvings < 60) {
                Eigen::VectorXd cand = rho + alpha * d;
                Eigen::VectorXd cslack = prob.N * cand - Eigen::VectorXd::Ones(K);
                if (cand.minCoeff() > 0.0 && cslack.minCoeff() > 0.0 &&
                    prob.value(t, cand, cslack) <= f0 - 1e-4 * alpha * decrement) {
                    rho = cand;
                    break;
                }
                alpha *= 0.5;
                ++halvings;
            }
            res.newton_steps++;
            if (halvings >= 60) break;
        }
        if (ineq / t < tol_gap * std::max(prob.energy(rho), 1e-300)) break;
        t *= 10.0;
    }

    res.value = prob.energy(rho);
    res.gap = ineq / t;
    res.rho.assign(rho.data(), rho.data() + m);
    return res;
}

BarrierResult barrier_modulus(const Family& f, double p, std::size_t max_rows, double tol_gap) {
    return barrier_modulus(f.enumerate(max_rows), f.graph().sigma().values, p, tol_gap);
}

bool is_extreme_point(const std::vector<UsageRow>& rows, const std::vector<double>& x,
                      int edge_count, double tol) {
    std::vector<int> free_coords;
    for (int e = 0; e < edge_count; ++e) {
        if (x[static_cast<std::size_t>(e)] < -tol) return false;
        if (x[static_cast<std::size_t>(e)] > tol) free_coords.push_back(e);
    }
    std::vector<const UsageRow*> active;
    for (const auto& row : rows) {
        double v = row.dot(x);
        if (v < 1.0 - tol) return false; // not even admissible
        if (v <= 1.0 + tol) active.push_back(&row);
    }
    if (free_coords.empty()) return true;
    if (active.empty()) return false;

    Eigen::MatrixXd A(static_cast<int>(active.size()), static_cast<int>(free_coords.size()));
    for (int r = 0; r < A.rows(); ++r)
        for (int c = 0; c < A.cols(); ++c)
            A(r, c) = active[static_cast<std::size_t>(r)]->usage(free_coords[static_cast<std::size_t>(c)]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-9);
    return lu.rank() == A.cols();
}

double clarkson_radius(double upper, double lower, double p, double sigma_min) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ParseError("clarkson_radius needs 1 < p < inf");
    if (!(sigma_min > 0.0)) throw ParseError("clarkson_radius needs positive weights");
    double q = p / (p - 1.0);
    double M = std::max(p, q);
    double diff = std::pow(upper, M / p) - std::pow(std::max(lower, 0.0), M / p);
    return std::pow(2.0, (M - 1.0) / M) * std::pow(sigma_min, -1.0 / p) *
           std::pow(std::max(diff, 0.0), 1.0 / M);
}

bool partition_is_vertex(const Graph& g, const FeasiblePartition& part) {
    // Shrink every part to a node; cut edges become a loopless multigraph H
    // on the parts.  The scaled vector is extreme exactly when H is a single
    // block: a cut vertex splits H into edge-disjoint pieces each carrying
    // its own "trees cross here exactly so often" affine relation, so the
    // tree indicators of H stop spanning the full edge space.
    int k = part.part_count;
    if (k == 2) return true; // K2 or one parallel class
    std::vector<std::pair<int, int>> edges;
    for (int e : part.cut_edges) {
        const Edge& ed = g.edge(e);
        edges.push_back({part.part_of[static_cast<std::size_t>(ed.tail)],
                         part.part_of[static_cast<std::size_t>(ed.head)]});
    }
    // No cut vertex <=> removing any one node keeps the rest connected.
    auto connected_without = [&](int skip) {
        std::vector<char> seen(static_cast<std::size_t>(k), 0);
        std::vector<int> stack{skip == 0 ? 1 : 0};
        seen[static_cast<std::size_t>(stack[0])] = 1;
        int reached = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (const auto& [s, t] : edges) {
                if (s == skip || t == skip) continue;
                int v = s == u ? t : (t == u ? s : -1);
                if (v >= 0 && !seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    ++reached;
                    stack.push_back(v);
                }
            }
        }
        return reached == k - 1;
    };
    for (int v = 0; v < k; ++v)
        if (!connected_without(v)) return false;
    return true;
}

} // namespace pmod
