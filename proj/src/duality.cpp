#include "pmod/duality.hpp"
#include "pmod/errors.hpp"

#include <cmath>

namespace pmod {

Density dual_weights(const Graph& g, double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw ParseError("dual weights need finite p > 1");
    }
    double q = conjugate_exponent(p);
    std::vector<double> w(static_cast<size_t>(g.edge_count()));
    for (int e = 0; e < g.edge_count(); ++e) {
        w[static_cast<size_t>(e)] = std::pow(g.weight(e), -q / p);
    }
    return Density(std::move(w));
}

Density blocker_density(const ModulusSolution& sol, const Graph& g) {
    if (!sol.converged) {
        throw ParseError("blocker density needs a converged solution");
    }
    if (!(sol.p > 1.0) || !std::isfinite(sol.p)) {
        throw ParseError("blocker density is defined for 1 < p < inf");
    }
    std::vector<double> eta(static_cast<size_t>(g.edge_count()));
    for (int e = 0; e < g.edge_count(); ++e) {
        double r = sol.rho[e];
        eta[static_cast<size_t>(e)] =
            g.weight(e) * (r <= 0.0 ? 0.0 : std::pow(r, sol.p - 1.0)) / sol.value;
    }
    return Density(std::move(eta), DensityRole::blocker);
}

DualityProductReport verify_duality_product(const Family& f, double p,
                                            const SolverOptions& options) {
    DualityProductReport rep;
    rep.p = p;
    rep.q = conjugate_exponent(p);
    rep.primal = solve_modulus(f, p, options);
    const Graph& g = f.graph();
    Graph dual_graph = g.reweighted(dual_weights(g, p));
    Family fhat = blocker_family(f, dual_graph);
    rep.blocker = solve_modulus(fhat, rep.q, options);
    rep.mod_primal = rep.primal.value;
    rep.mod_blocker = rep.blocker.value;
    rep.lhs = std::pow(rep.mod_primal, 1.0 / p) * std::pow(rep.mod_blocker, 1.0 / rep.q);
    rep.residual = std::abs(rep.lhs - rep.rhs);
    for (int e = 0; e < g.edge_count(); ++e) {
        rep.eta_match = std::max(rep.eta_match, std::abs(rep.blocker.rho[e] - rep.primal.eta[e]));
    }
    return rep;
}

EndpointDualityReport verify_p1_pinf_duality(const Family& f, const SolverOptions& options) {
    EndpointDualityReport rep;
    rep.primal = solve_modulus_p1(f, options);
    const Graph& g = f.graph();
    std::vector<double> inv(static_cast<size_t>(g.edge_count()));
    for (int e = 0; e < g.edge_count(); ++e) inv[static_cast<size_t>(e)] = 1.0 / g.weight(e);
    Graph dual_graph = g.reweighted(Density(std::move(inv)));
    Family fhat = blocker_family(f, dual_graph);
    rep.blocker = solve_modulus_pinf(fhat);
    rep.mod1 = rep.primal.value;
    rep.mod_inf = rep.blocker.value;
    rep.lhs = rep.mod1 * rep.mod_inf;
    rep.residual = std::abs(rep.lhs - rep.rhs);
    return rep;
}

double expected_usage_deviation(const ModulusSolution& sol, const Graph& g) {
    std::vector<double> expected(static_cast<size_t>(g.edge_count()), 0.0);
    for (size_t i = 0; i < sol.active_rows.size(); ++i) {
        double mu = i < sol.pmf.size() ? sol.pmf[i] : 0.0;
        for (const auto& [e, n] : sol.active_rows[i].entries) {
            expected[static_cast<size_t>(e)] += mu * n;
        }
    }
    double dev = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) {
        dev = std::max(dev, std::abs(sol.eta[e] - expected[static_cast<size_t>(e)]));
    }
    return dev;
}

double pmf_value_identity_residual(const ModulusSolution& sol, const Graph& g) {
    if (!(sol.p > 1.0) || !std::isfinite(sol.p)) {
        throw ParseError("value identity is defined for 1 < p < inf");
    }
    double q = conjugate_exponent(sol.p);
    std::vector<double> expected(static_cast<size_t>(g.edge_count()), 0.0);
    for (size_t i = 0; i < sol.active_rows.size(); ++i) {
        double mu = i < sol.pmf.size() ? sol.pmf[i] : 0.0;
        for (const auto& [e, n] : sol.active_rows[i].entries) {
            expected[static_cast<size_t>(e)] += mu * n;
        }
    }
    Density shat = dual_weights(g, sol.p);
    double lhs = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) {
        double x = expected[static_cast<size_t>(e)];
        lhs += shat[e] * (x <= 0.0 ? 0.0 : std::pow(x, q));
    }
    double rhs = std::pow(sol.value, -q / sol.p);
    return std::abs(lhs - rhs) / rhs;
}

} // namespace pmod
