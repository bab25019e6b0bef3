#pragma once

#include "pmod/solver.hpp"

#include <string>
#include <vector>

namespace pmod {

struct GradientEntry {
    int edge = -1;
    std::string edge_key;
    double fd = 0.0;       // central difference of the modulus in sigma(e)
    double analytic = 0.0; // rho*(e)^p
    double abs_dev = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct GradientReport {
    double p = 0.0;
    double h_rel = 0.0;
    double curvature = 0.0; // Richardson estimate of the h^2 coefficient
    double mod = 0.0;
    std::vector<GradientEntry> entries;
    double max_rel_dev = 0.0; // |fd - analytic| / max(analytic, floor)
    bool pass = true;
};

// Central differences of sigma |-> Mod against the closed-form partial
// derivative rho*(e)^p.  Per-edge step h = h_rel * sigma(e); the tolerance
// per edge is max(1e-3 * analytic, 10 * rel_tol + curvature * h^2).
// Internally solves at a much tighter gap so solver noise stays below the
// difference quotient.
GradientReport gradient_check(const Family& f, double p, double h_rel = 1e-4,
                              const SolverOptions& options = {});

struct SweepRow {
    double sigma_e = 0.0;
    double mod = 0.0;
    double rho_e = 0.0;
    double eta_e = 0.0;
    bool converged = false;
};

struct SweepReport {
    int edge = -1;
    std::string edge_key;
    double p = 0.0;
    std::vector<SweepRow> rows;
    // largest relative step in the forbidden direction, 0 when monotone
    double worst_mod_violation = 0.0; // mod must not decrease
    double worst_rho_violation = 0.0; // rho*(e) must not increase
    double worst_eta_violation = 0.0; // eta*(e) must not decrease
    double slack = 0.0;               // allowed violation, 10 * rel_tol
    bool pass = true;
};

// Re-solves along an increasing grid of sigma(e) values and checks the
// three monotonicity directions.
SweepReport monotonicity_sweep(const Family& f, double p, int edge,
                               const std::vector<double>& grid,
                               const SolverOptions& options = {});

struct ConcavityReport {
    double p = 0.0;
    double mod0 = 0.0, mod1 = 0.0;
    std::vector<double> ts;
    std::vector<double> slacks; // mod(sigma_t) - chord value
    double min_slack = 0.0;
    double allowed = 0.0; // -10 * rel_tol * scale
    bool pass = true;
};

// Concavity of sigma |-> Mod along the segment sigma0 -> sigma1; default
// grid t in {0.1, ..., 0.9}.
ConcavityReport concavity_check(const Family& f, double p, const Density& sigma0,
                                const Density& sigma1, std::vector<double> tgrid = {},
                                const SolverOptions& options = {});

struct LipschitzReport {
    double p = 0.0;
    double lhs = 0.0;   // |mod(sigma1) - mod(sigma0)|
    double bound = 0.0; // n_min^{-p} * ||sigma1 - sigma0||_1
    double slack = 0.0; // bound - lhs
    bool pass = true;
};

LipschitzReport lipschitz_witness(const Family& f, double p, const Density& sigma0,
                                  const Density& sigma1, const SolverOptions& options = {});

} // namespace pmod
