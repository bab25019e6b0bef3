#include "pmod/solver.hpp"
#include "pmod/blocker.hpp"
#include "pmod/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pmod {

namespace {

// pow on the nonnegative half line; base <= 0 collapses to 0.
inline double powr(double base, double expo) {
    return base <= 0.0 ? 0.0 : std::pow(base, expo);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// Restricted Lagrangian dual over the working subfamily: maximise
//   sum_i lambda_i - (p-1) sum_e sigma(e) rho_lambda(e)^p,   lambda >= 0,
// where rho_lambda(e) = (s_e / (p sigma(e)))^{1/(p-1)} and s = N^T lambda.
class RestrictedDual {
public:
    RestrictedDual(const Graph& g, double p, bool polish)
        : g_(g), p_(p), alpha_(1.0 / (p - 1.0)), polish_(polish),
          psigma_(static_cast<size_t>(g.edge_count())),
          s_(static_cast<size_t>(g.edge_count()), 0.0) {
        for (int e = 0; e < g.edge_count(); ++e) {
            psigma_[static_cast<size_t>(e)] = p * g.weight(e);
        }
    }

    int row_count() const { return static_cast<int>(rows_.size()); }
    const std::vector<UsageRow>& rows() const { return rows_; }
    const std::vector<double>& lambda() const { return lambda_; }

    bool has_row(const UsageRow& r) const {
        for (const UsageRow& mine : rows_) {
            if (mine.same_entries(r)) return true;
        }
        return false;
    }

    void add_row(UsageRow r) {
        rows_.push_back(std::move(r));
        lambda_.push_back(0.0);
    }

    double rho_edge(int e) const {
        return powr(s_[static_cast<size_t>(e)] / psigma_[static_cast<size_t>(e)], alpha_);
    }

    std::vector<double> rho() const {
        std::vector<double> out(s_.size());
        for (int e = 0; e < static_cast<int>(s_.size()); ++e) out[static_cast<size_t>(e)] = rho_edge(e);
        return out;
    }

    double ell(const UsageRow& r) const {
        double v = 0.0;
        for (const auto& [e, n] : r.entries) v += n * rho_edge(e);
        return v;
    }

    double dual_value() const {
        double lam = 0.0;
        for (double l : lambda_) lam += l;
        double en = 0.0;
        for (int e = 0; e < static_cast<int>(s_.size()); ++e) {
            en += g_.weight(e) * powr(rho_edge(e), p_);
        }
        return lam - (p_ - 1.0) * en;
    }

    // (upper - dual) / upper on the working subfamily only.
    double restricted_gap() const {
        double lmin = std::numeric_limits<double>::infinity();
        for (const UsageRow& r : rows_) lmin = std::min(lmin, ell(r));
        if (!(lmin > 0.0)) return std::numeric_limits<double>::infinity();
        double en = 0.0;
        for (int e = 0; e < static_cast<int>(s_.size()); ++e) {
            en += g_.weight(e) * powr(rho_edge(e), p_);
        }
        double upper = en / powr(lmin, p_);
        if (!(upper > 0.0)) return std::numeric_limits<double>::infinity();
        return (upper - dual_value()) / upper;
    }

    // Cyclic coordinate ascent with periodic Newton refinement.  Returns
    // the number of sweeps consumed.
    long optimize(double tol, long sweep_budget) {
        long used = 0;
        if (rows_.empty()) return used;
        while (used < sweep_budget) {
            long chunk = std::min<long>(sweep_budget - used, 25);
            for (long s = 0; s < chunk; ++s) {
                for (size_t i = 0; i < rows_.size(); ++i) coordinate_update(static_cast<int>(i));
            }
            used += chunk;
            recompute_s();
            if (polish_) newton_refine();
            if (restricted_gap() <= tol) break;
        }
        return used;
    }

    void recompute_s() {
        std::fill(s_.begin(), s_.end(), 0.0);
        for (size_t i = 0; i < rows_.size(); ++i) {
            for (const auto& [e, n] : rows_[i].entries) {
                s_[static_cast<size_t>(e)] += lambda_[i] * n;
            }
        }
    }

private:
    // Exact maximisation over one multiplier with the others fixed: the
    // stationarity condition is ell_i(rho_lambda) = 1, a monotone
    // one-dimensional root problem in t = lambda_i.
    void coordinate_update(int i) {
        const UsageRow& r = rows_[static_cast<size_t>(i)];
        double li = lambda_[static_cast<size_t>(i)];
        double g0 = 0.0;
        for (const auto& [e, n] : r.entries) {
            double a = std::max(s_[static_cast<size_t>(e)] - n * li, 0.0);
            g0 += n * powr(a / psigma_[static_cast<size_t>(e)], alpha_);
        }
        double t;
        if (g0 >= 1.0) {
            t = 0.0;
        } else if (p_ == 2.0) {
            double denom = 0.0;
            for (const auto& [e, n] : r.entries) denom += n * n / psigma_[static_cast<size_t>(e)];
            t = (1.0 - g0) / denom;
        } else {
            t = coordinate_root(r, li);
        }
        for (const auto& [e, n] : r.entries) {
            double a = std::max(s_[static_cast<size_t>(e)] - n * li, 0.0);
            s_[static_cast<size_t>(e)] = a + n * t;
        }
        lambda_[static_cast<size_t>(i)] = t;
    }

    double coordinate_root(const UsageRow& r, double li) const {
        auto eval = [&](double t, double* deriv) {
            double v = 0.0, d = 0.0;
            for (const auto& [e, n] : r.entries) {
                double a = std::max(s_[static_cast<size_t>(e)] - n * li, 0.0);
                double base = (a + n * t) / psigma_[static_cast<size_t>(e)];
                v += n * powr(base, alpha_);
                if (deriv && base > 0.0) {
                    d += n * n * alpha_ * powr(base, alpha_ - 1.0) /
                         psigma_[static_cast<size_t>(e)];
                }
            }
            if (deriv) *deriv = d;
            return v;
        };
        double lo = 0.0, hi = std::max(li, 1.0);
        int guard = 0;
        while (eval(hi, nullptr) < 1.0) {
            lo = hi;
            hi *= 2.0;
            if (++guard > 4000) throw Error("coordinate root bracketing failed");
        }
        double t = 0.5 * (lo + hi);
        for (int iter = 0; iter < 100; ++iter) {
            double d = 0.0;
            double v = eval(t, &d);
            if (std::abs(v - 1.0) <= 1e-14) break;
            if (v < 1.0) lo = t; else hi = t;
            double step = d > 0.0 ? t - (v - 1.0) / d : -1.0;
            t = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
            if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
        }
        return t;
    }

    // KKT residual of the working set: tightness of rows carrying weight and
    // feasibility of the rest.
    double merit(const std::vector<double>& lam, const std::vector<double>& s) const {
        double worst = 0.0;
        for (size_t i = 0; i < rows_.size(); ++i) {
            double lv = 0.0;
            for (const auto& [e, n] : rows_[i].entries) {
                lv += n * powr(s[static_cast<size_t>(e)] / psigma_[static_cast<size_t>(e)], alpha_);
            }
            if (lam[i] > 0.0) worst = std::max(worst, std::abs(lv - 1.0));
            else worst = std::max(worst, std::max(0.0, 1.0 - lv));
        }
        return worst;
    }

    std::vector<double> s_from(const std::vector<double>& lam) const {
        std::vector<double> s(s_.size(), 0.0);
        for (size_t i = 0; i < rows_.size(); ++i) {
            for (const auto& [e, n] : rows_[i].entries) {
                s[static_cast<size_t>(e)] += lam[i] * n;
            }
        }
        return s;
    }

    // Equality Newton on the active rows (ell_i = 1), with nonnegativity
    // kept by step clamping.  The Jacobian is N_A diag(w) N_A^T with
    // w_e = d rho / d s_e, floored in s to keep it finite for p > 2.
    void newton_refine() {
        const int max_iter = 40;
        for (int iter = 0; iter < max_iter; ++iter) {
            double cur = merit(lambda_, s_);
            if (cur <= 5e-14) return;
            double lam_max = 0.0;
            for (double l : lambda_) lam_max = std::max(lam_max, l);
            double act_eps = 1e-12 * std::max(1.0, lam_max);
            std::vector<int> act;
            for (size_t i = 0; i < rows_.size(); ++i) {
                if (lambda_[i] > act_eps || ell(rows_[i]) < 1.0 - 1e-12) {
                    act.push_back(static_cast<int>(i));
                }
            }
            if (act.empty()) return;
            int k = static_cast<int>(act.size());
            double s_scale = *std::max_element(s_.begin(), s_.end());
            if (!(s_scale > 0.0)) return;
            double s_floor = 1e-14 * s_scale;
            std::vector<double> w(s_.size(), 0.0);
            for (size_t e = 0; e < s_.size(); ++e) {
                double se = std::max(s_[e], s_floor);
                w[e] = alpha_ * powr(se / psigma_[e], alpha_ - 1.0) / psigma_[e];
            }
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(k, k);
            Eigen::VectorXd F(k);
            for (int a = 0; a < k; ++a) {
                const UsageRow& ra = rows_[static_cast<size_t>(act[static_cast<size_t>(a)])];
                F(a) = ell(ra) - 1.0;
                for (int b = a; b < k; ++b) {
                    const UsageRow& rb = rows_[static_cast<size_t>(act[static_cast<size_t>(b)])];
                    double acc = 0.0;
                    // rows are sorted by edge id; sparse dot through w
                    size_t ia = 0, ib = 0;
                    while (ia < ra.entries.size() && ib < rb.entries.size()) {
                        if (ra.entries[ia].first == rb.entries[ib].first) {
                            acc += ra.entries[ia].second * rb.entries[ib].second *
                                   w[static_cast<size_t>(ra.entries[ia].first)];
                            ++ia;
                            ++ib;
                        } else if (ra.entries[ia].first < rb.entries[ib].first) {
                            ++ia;
                        } else {
                            ++ib;
                        }
                    }
                    J(a, b) = acc;
                    J(b, a) = acc;
                }
            }
            double ridge = 1e-14 * std::max(1.0, J.trace());
            for (int a = 0; a < k; ++a) J(a, a) += ridge;
            Eigen::VectorXd delta = J.ldlt().solve(-F);
            if (!delta.allFinite()) return;
            // largest feasible fraction of the step
            double tau = 1.0;
            for (int a = 0; a < k; ++a) {
                double l = lambda_[static_cast<size_t>(act[static_cast<size_t>(a)])];
                if (delta(a) < 0.0 && l + delta(a) < 0.0) tau = std::min(tau, l / -delta(a));
            }
            bool improved = false;
            for (int half = 0; half < 6 && !improved; ++half) {
                std::vector<double> cand = lambda_;
                for (int a = 0; a < k; ++a) {
                    size_t i = static_cast<size_t>(act[static_cast<size_t>(a)]);
                    cand[i] = std::max(cand[i] + tau * delta(a), 0.0);
                }
                std::vector<double> cs = s_from(cand);
                if (merit(cand, cs) < cur) {
                    lambda_ = std::move(cand);
                    s_ = std::move(cs);
                    improved = true;
                }
                tau *= 0.5;
            }
            if (!improved) return;
        }
    }

    const Graph& g_;
    double p_;
    double alpha_;
    bool polish_;
    std::vector<double> psigma_; // p * sigma(e)
    std::vector<UsageRow> rows_;
    std::vector<double> lambda_;
    std::vector<double> s_; // N^T lambda
};

} // namespace

double energy(const Graph& g, double p, const Density& rho) {
    double en = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) {
        en += g.weight(e) * powr(rho[e], p);
    }
    return en;
}

ModulusSolution solve_modulus(const Family& family, double p, const SolverOptions& options) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw ParseError("solve_modulus needs finite p > 1, got " + fmt(p));
    }
    const Graph& g = family.graph();
    int m = g.edge_count();
    if (m == 0) throw FamilyEmptyError("graph has no edges");

    ModulusSolution sol;
    sol.p = p;
    if (p < 1.1 || p > 20.0) {
        sol.warnings.push_back("p=" + fmt(p) + " conditioning: exponent 1/(p-1)=" +
                               fmt(1.0 / (p - 1.0)) +
                               " amplifies rounding; certificates may need more iterations");
    }

    const double nmin = family.n_min();
    Density start = Density::constant(m, 1.0 / nmin);
    Family::OracleResult first = family.shortest_object(start);
    sol.oracle_calls = 1;
    // start is admissible by the definition of N_min, so its scaled energy
    // is already a certified upper bound.
    double best_upper = energy(g, p, start) / powr(first.value, p);
    Density best_rho = start;
    for (int e = 0; e < m; ++e) best_rho[e] /= first.value;
    double best_lower = 0.0;
    std::vector<double> best_lambda;
    std::vector<UsageRow> best_rows;

    RestrictedDual dual(g, p, options.polish);
    dual.add_row(first.row);

    const int outer_cap = options.max_outer > 0 ? options.max_outer : std::max(10 * m, 20);
    long sweeps_left = options.max_inner_sweeps;
    double inner_tol = 0.4 * options.rel_tol;
    bool converged = false;

    while (sol.outer_iterations < outer_cap) {
        ++sol.outer_iterations;
        long used = dual.optimize(inner_tol, sweeps_left);
        sweeps_left -= used;
        sol.inner_sweeps += used;

        double L = dual.dual_value();
        if (L > best_lower) {
            best_lower = L;
            best_lambda = dual.lambda();
            best_rows = dual.rows();
        }
        Density rho(dual.rho());
        Family::OracleResult orc = family.shortest_object(rho);
        ++sol.oracle_calls;
        if (orc.value > 0.0) {
            double upper = energy(g, p, rho) / powr(orc.value, p);
            if (upper < best_upper) {
                best_upper = upper;
                best_rho = rho;
                for (int e = 0; e < m; ++e) best_rho[e] /= orc.value;
            }
        }
        double gap = (best_upper - best_lower) / best_upper;
        if (gap <= options.rel_tol) {
            converged = true;
            break;
        }
        if (orc.value >= 1.0 - options.adm_tol || dual.has_row(orc.row)) {
            // No addable violated row: the restricted solve is the blocker,
            // so tighten it and retry.
            if (inner_tol <= 1e-15 || sweeps_left <= 0) break;
            inner_tol = std::max(inner_tol / 100.0, 1e-15);
            continue;
        }
        dual.add_row(orc.row);
        if (sweeps_left <= 0) break;
    }

    sol.converged = converged;
    sol.lower = best_lower;
    sol.upper = best_upper;
    sol.value = 0.5 * (best_lower + best_upper);
    sol.rho = best_rho;
    sol.rho.role = DensityRole::primal;

    Family::OracleResult adm = family.shortest_object(sol.rho);
    ++sol.oracle_calls;
    sol.admissibility = adm.value;

    sol.eta = Density(std::vector<double>(static_cast<size_t>(m), 0.0), DensityRole::blocker);
    for (int e = 0; e < m; ++e) {
        sol.eta[e] = g.weight(e) * powr(sol.rho[e], p - 1.0) / sol.value;
    }

    sol.active_rows = std::move(best_rows);
    sol.multipliers = std::move(best_lambda);
    for (double l : sol.multipliers) sol.lambda_l1 += l;
    if (sol.lambda_l1 > 0.0) {
        sol.pmf.reserve(sol.multipliers.size());
        for (double l : sol.multipliers) sol.pmf.push_back(l / sol.lambda_l1);
    }

    // deviation of the certificate from the KKT reconstruction at lambda
    {
        std::vector<double> s(static_cast<size_t>(m), 0.0);
        for (size_t i = 0; i < sol.active_rows.size(); ++i) {
            for (const auto& [e, n] : sol.active_rows[i].entries) {
                s[static_cast<size_t>(e)] += sol.multipliers[i] * n;
            }
        }
        double dev = 0.0, scale = 0.0;
        for (int e = 0; e < m; ++e) {
            double rk = powr(s[static_cast<size_t>(e)] / (p * g.weight(e)), 1.0 / (p - 1.0));
            dev = std::max(dev, std::abs(sol.rho[e] - rk));
            scale = std::max(scale, sol.rho[e]);
        }
        sol.kkt_gap = scale > 0.0 ? dev / scale : dev;
    }

    // Clarkson-type radius: ||rho - rho*||_p <= 2^{(M-1)/M} sigma_min^{-1/p}
    // (U^{M/p} - L^{M/p})^{1/M}, M = max(p, q).
    {
        double q = conjugate_exponent(p);
        double M = std::max(p, q);
        double sigma_min = std::numeric_limits<double>::infinity();
        for (int e = 0; e < m; ++e) sigma_min = std::min(sigma_min, g.weight(e));
        double diff = powr(best_upper, M / p) - powr(std::max(best_lower, 0.0), M / p);
        sol.quasi_radius =
            powr(2.0, (M - 1.0) / M) * powr(sigma_min, -1.0 / p) * powr(std::max(diff, 0.0), 1.0 / M);
    }

    if (!converged) {
        sol.warnings.push_back("stopped with relative gap " +
                               fmt((best_upper - best_lower) / best_upper) + " > " +
                               fmt(options.rel_tol));
    }
    return sol;
}

ModulusSolution solve_modulus_p1(const Family& family, const SolverOptions& options) {
    (void)options;
    const Graph& g = family.graph();
    int m = g.edge_count();
    ModulusSolution sol;
    sol.p = 1.0;
    sol.converged = true;
    sol.rho = Density(std::vector<double>(static_cast<size_t>(m), 0.0), DensityRole::primal);

    switch (family.kind()) {
    case FamilyKind::connect: {
        CutResult c = min_cut(g, family.endpoint_a(), family.endpoint_b(), g.sigma());
        sol.value = c.value;
        for (int e : c.edges) sol.rho[e] = 1.0;
        UsageRow v;
        for (int e : c.edges) v.entries.emplace_back(e, 1.0);
        std::sort(v.entries.begin(), v.entries.end());
        v.label = edge_set_label(g, "cut", c.edges);
        sol.blocker_vertex = std::move(v);
        break;
    }
    case FamilyKind::cut: {
        PathResult pr = shortest_path(g, family.endpoint_a(), family.endpoint_b(), g.sigma());
        sol.value = pr.length;
        for (int e : pr.edges) sol.rho[e] = 1.0;
        UsageRow v;
        for (int e : pr.edges) v.entries.emplace_back(e, 1.0);
        std::sort(v.entries.begin(), v.entries.end());
        v.label = path_label(g, pr.vertices);
        sol.blocker_vertex = std::move(v);
        break;
    }
    case FamilyKind::explicit_rows: {
        std::vector<BlockerVertex> verts = enumerate_blocker_vertices(family);
        double best = std::numeric_limits<double>::infinity();
        const BlockerVertex* arg = nullptr;
        for (const BlockerVertex& v : verts) {
            double cost = 0.0;
            for (int e = 0; e < m; ++e) cost += g.weight(e) * v.coords[static_cast<size_t>(e)];
            if (cost < best) {
                best = cost;
                arg = &v;
            }
        }
        if (!arg) throw Error("blocker enumeration returned no vertices");
        sol.value = best;
        UsageRow v;
        v.label = arg->label;
        for (int e = 0; e < m; ++e) {
            sol.rho[e] = arg->coords[static_cast<size_t>(e)];
            if (arg->coords[static_cast<size_t>(e)] > 0.0) {
                v.entries.emplace_back(e, arg->coords[static_cast<size_t>(e)]);
            }
        }
        sol.blocker_vertex = std::move(v);
        break;
    }
    case FamilyKind::spanning_tree:
        throw UnsupportedError(
            "p=1 modulus is not implemented for spanning-tree families; "
            "supported kinds are connect, cut and explicit rows");
    }

    sol.lower = sol.upper = sol.value;
    // Blocker certificate via p -> 1: rho^{p-1} -> indicator of the support.
    sol.eta = Density(std::vector<double>(static_cast<size_t>(m), 0.0), DensityRole::blocker);
    if (sol.value > 0.0)
        for (int e = 0; e < m; ++e) sol.eta[e] = g.weight(e) * sol.rho[e] / sol.value;
    Family::OracleResult adm = family.shortest_object(sol.rho);
    sol.oracle_calls = 1;
    sol.admissibility = adm.value;
    return sol;
}

ModulusSolution solve_modulus_pinf(const Family& family) {
    const Graph& g = family.graph();
    int m = g.edge_count();
    std::vector<double> inv(static_cast<size_t>(m));
    for (int e = 0; e < m; ++e) inv[static_cast<size_t>(e)] = 1.0 / g.weight(e);
    Family::OracleResult orc = family.shortest_object(Density(inv));
    if (!(orc.value > 0.0)) {
        throw Error("inf-modulus: shortest object has zero 1/sigma-length");
    }
    ModulusSolution sol;
    sol.p = std::numeric_limits<double>::infinity();
    sol.converged = true;
    sol.value = sol.lower = sol.upper = 1.0 / orc.value;
    sol.oracle_calls = 1;
    sol.rho = Density(std::vector<double>(static_cast<size_t>(m), 0.0), DensityRole::primal);
    for (int e = 0; e < m; ++e) sol.rho[e] = sol.value / g.weight(e);
    // No finite conjugate certificate at p = inf; eta stays zero.
    sol.eta = Density(std::vector<double>(static_cast<size_t>(m), 0.0), DensityRole::blocker);
    sol.active_rows = {orc.row};
    Family::OracleResult adm = family.shortest_object(sol.rho);
    ++sol.oracle_calls;
    sol.admissibility = adm.value;
    return sol;
}

ModulusSolution solve(const Family& family, double p, const SolverOptions& options) {
    if (std::isnan(p) || p < 1.0) {
        throw ParseError("p must satisfy 1 <= p <= inf, got " + fmt(p));
    }
    if (p == 1.0) return solve_modulus_p1(family, options);
    if (std::isinf(p)) return solve_modulus_pinf(family);
    return solve_modulus(family, p, options);
}

} // namespace pmod
