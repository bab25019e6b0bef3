#include "pmod/sensitivity.hpp"

#include "pmod/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace pmod {

namespace {

// Finite differences divide out h and densities carry sqrt-of-gap noise,
// so the solves underneath have to be far tighter than the caller's
// tolerance; the reported slacks still quote the caller's rel_tol.
SolverOptions tighten(const SolverOptions& options) {
    SolverOptions t = options;
    t.rel_tol = std::min(options.rel_tol, 1e-12);
    t.adm_tol = std::min(options.adm_tol, 1e-14);
    t.polish = true;
    return t;
}

ModulusSolution solve_at(const Family& f, double p, const Density& sigma,
                         const SolverOptions& options) {
    Graph g = f.graph().reweighted(sigma);
    Family fb = f.rebind(g);
    return solve(fb, p, options);
}

double mod_at(const Family& f, double p, const Density& sigma,
              const SolverOptions& options) {
    return solve_at(f, p, sigma, options).value;
}

Density current_sigma(const Graph& g) { return g.sigma(); }

} // namespace

GradientReport gradient_check(const Family& f, double p, double h_rel,
                              const SolverOptions& options) {
    if (!(p >= 1.0) || std::isinf(p))
        throw ParseError("gradient_check requires finite p >= 1");
    if (!(h_rel > 0.0) || h_rel >= 0.5)
        throw ParseError("gradient_check step must lie in (0, 0.5)");

    const Graph& g = f.graph();
    SolverOptions tight = tighten(options);
    ModulusSolution base = solve(f, p, tight);

    GradientReport rep;
    rep.p = p;
    rep.h_rel = h_rel;
    rep.mod = base.value;

    Density sigma = current_sigma(g);
    for (int e = 0; e < g.edge_count(); ++e) {
        double h = h_rel * sigma[e];
        auto fd_at = [&](double step) {
            Density sp = sigma, sm = sigma;
            sp.values[e] += step;
            sm.values[e] -= step;
            double mp = mod_at(f, p, sp, tight);
            double mm = mod_at(f, p, sm, tight);
            return (mp - mm) / (2.0 * step);
        };
        GradientEntry entry;
        entry.edge = e;
        entry.edge_key = g.edge_key(e);
        entry.fd = fd_at(h);
        double fd2 = fd_at(2.0 * h);
        // fd(h) = f' + C h^2 + O(h^4), so fd(2h) - fd(h) = 3 C h^2.
        double curv = std::abs(fd2 - entry.fd) / (3.0 * h * h);
        rep.curvature = std::max(rep.curvature, curv);
        entry.analytic = std::pow(std::max(base.rho[e], 0.0), p);
        entry.abs_dev = std::abs(entry.fd - entry.analytic);
        double noise = 10.0 * tight.rel_tol * std::max(base.value, 1.0) / h;
        entry.tol = std::max(1e-3 * entry.analytic, noise + curv * h * h);
        entry.pass = entry.abs_dev <= entry.tol;
        rep.pass = rep.pass && entry.pass;
        double denom = std::max(entry.analytic, noise + curv * h * h);
        if (denom > 0.0)
            rep.max_rel_dev = std::max(rep.max_rel_dev, entry.abs_dev / denom);
        rep.entries.push_back(std::move(entry));
    }
    return rep;
}

SweepReport monotonicity_sweep(const Family& f, double p, int edge,
                               const std::vector<double>& grid,
                               const SolverOptions& options) {
    const Graph& g = f.graph();
    if (edge < 0 || edge >= g.edge_count())
        throw ParseError("monotonicity_sweep: edge index out of range");
    if (grid.size() < 2)
        throw ParseError("monotonicity_sweep needs at least two grid points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0))
            throw ParseError("monotonicity_sweep grid values must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw ParseError("monotonicity_sweep grid must be strictly increasing");
    }

    SolverOptions tight = tighten(options);
    SweepReport rep;
    rep.edge = edge;
    rep.edge_key = g.edge_key(edge);
    rep.p = p;
    rep.slack = 10.0 * options.rel_tol;

    Density sigma = current_sigma(g);
    for (double w : grid) {
        Density s = sigma;
        s.values[edge] = w;
        ModulusSolution sol = solve_at(f, p, s, tight);
        SweepRow row;
        row.sigma_e = w;
        row.mod = sol.value;
        row.rho_e = sol.rho[edge];
        row.eta_e = sol.eta[edge];
        row.converged = sol.converged;
        rep.rows.push_back(row);
    }

    auto rel_drop = [](double prev, double next) {
        double scale = std::max({std::abs(prev), std::abs(next), 1e-12});
        return (prev - next) / scale; // positive when the value decreased
    };
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const SweepRow& a = rep.rows[i - 1];
        const SweepRow& b = rep.rows[i];
        rep.worst_mod_violation = std::max(rep.worst_mod_violation, rel_drop(a.mod, b.mod));
        rep.worst_rho_violation = std::max(rep.worst_rho_violation, rel_drop(b.rho_e, a.rho_e));
        rep.worst_eta_violation = std::max(rep.worst_eta_violation, rel_drop(a.eta_e, b.eta_e));
    }
    rep.pass = rep.worst_mod_violation <= rep.slack && rep.worst_rho_violation <= rep.slack &&
               rep.worst_eta_violation <= rep.slack;
    return rep;
}

ConcavityReport concavity_check(const Family& f, double p, const Density& sigma0,
                                const Density& sigma1, std::vector<double> tgrid,
                                const SolverOptions& options) {
    const Graph& g = f.graph();
    sigma0.check(g.edge_count(), "sigma0");
    sigma1.check(g.edge_count(), "sigma1");
    if (tgrid.empty())
        for (int i = 1; i <= 9; ++i) tgrid.push_back(0.1 * i);
    for (double t : tgrid)
        if (!(t > 0.0 && t < 1.0))
            throw ParseError("concavity_check grid values must lie in (0, 1)");

    SolverOptions tight = tighten(options);
    ConcavityReport rep;
    rep.p = p;
    rep.mod0 = mod_at(f, p, sigma0, tight);
    rep.mod1 = mod_at(f, p, sigma1, tight);

    double scale = std::max({std::abs(rep.mod0), std::abs(rep.mod1), 1e-12});
    rep.allowed = -10.0 * options.rel_tol * scale;
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (double t : tgrid) {
        Density s = sigma0;
        for (int e = 0; e < g.edge_count(); ++e)
            s.values[e] = (1.0 - t) * sigma0.values[e] + t * sigma1.values[e];
        double mt = mod_at(f, p, s, tight);
        double chord = (1.0 - t) * rep.mod0 + t * rep.mod1;
        rep.ts.push_back(t);
        rep.slacks.push_back(mt - chord);
        rep.min_slack = std::min(rep.min_slack, mt - chord);
    }
    rep.pass = rep.min_slack >= rep.allowed;
    return rep;
}

LipschitzReport lipschitz_witness(const Family& f, double p, const Density& sigma0,
                                  const Density& sigma1, const SolverOptions& options) {
    const Graph& g = f.graph();
    sigma0.check(g.edge_count(), "sigma0");
    sigma1.check(g.edge_count(), "sigma1");
    if (!(p >= 1.0) || std::isinf(p))
        throw ParseError("lipschitz_witness requires finite p >= 1");

    SolverOptions tight = tighten(options);
    LipschitzReport rep;
    rep.p = p;
    double m0 = mod_at(f, p, sigma0, tight);
    double m1 = mod_at(f, p, sigma1, tight);
    rep.lhs = std::abs(m1 - m0);
    double l1 = 0.0;
    for (int e = 0; e < g.edge_count(); ++e)
        l1 += std::abs(sigma1.values[e] - sigma0.values[e]);
    rep.bound = std::pow(f.n_min(), -p) * l1;
    rep.slack = rep.bound - rep.lhs;
    // Solver noise on the two endpoints.
    rep.pass = rep.lhs <= rep.bound + 10.0 * options.rel_tol * std::max(m0, m1);
    return rep;
}

} // namespace pmod
