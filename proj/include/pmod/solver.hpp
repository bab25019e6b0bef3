#pragma once

#include "pmod/family.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pmod {

struct SolverOptions {
    double rel_tol = 1e-6;          // certified duality gap target (U - L) / U
    double adm_tol = 1e-8;          // oracle slack below which no row is added
    int max_outer = 0;              // 0 means 10 * edge_count
    long max_inner_sweeps = 100000; // total coordinate sweeps across all rounds
    bool polish = true;             // Newton refinement of the working dual
};

struct ModulusSolution {
    double p = 2.0;
    double value = 0.0; // midpoint of [lower, upper]
    double lower = 0.0; // Lagrangian dual bound
    double upper = 0.0; // energy of the admissible certificate rho
    bool converged = false;

    Density rho; // exactly admissible primal certificate (scaled iterate)
    Density eta; // sigma(e) rho(e)^{p-1} / value, the blocker-side certificate

    std::vector<UsageRow> active_rows; // working subfamily Gamma'
    std::vector<double> multipliers;   // lambda, aligned with active_rows
    std::vector<double> pmf;           // lambda / ||lambda||_1
    double lambda_l1 = 0.0;

    int outer_iterations = 0;
    long inner_sweeps = 0;
    int oracle_calls = 0;

    double admissibility = 0.0; // min ell_rho(gamma), from a final oracle call
    double kkt_gap = 0.0;       // sup |rho - rho_lambda| / sup rho
    double quasi_radius = 0.0;  // certified p-norm distance bound to rho*

    std::optional<UsageRow> blocker_vertex; // p=1 minimising vertex
    std::vector<std::string> warnings;
};

double energy(const Graph& g, double p, const Density& rho);
inline double conjugate_exponent(double p) { return p / (p - 1.0); }

// Exterior-point constraint generation for 1 < p < inf.  Grows a working
// subfamily through the shortest-object oracle; the restricted problem is
// solved on the Lagrangian dual by cyclic coordinate ascent (optionally
// Newton-refined on the active set).  U comes from the scaled-admissible
// iterate, L from the dual value; both are certified bounds.
ModulusSolution solve_modulus(const Family& family, double p,
                              const SolverOptions& options = {});

// p = 1 endpoints: min cut for connect, shortest sigma-path for cut,
// minimum over enumerated blocker vertices for explicit rows.
ModulusSolution solve_modulus_p1(const Family& family,
                                 const SolverOptions& options = {});

// p = inf: value is 1 / min_gamma sum_e N(gamma,e)/w(e) with w the graph
// weights; the optimal density w-scaled is reported.
ModulusSolution solve_modulus_pinf(const Family& family);

// Dispatch on p: exactly 1, finite in (1, inf), or +infinity.
ModulusSolution solve(const Family& family, double p,
                      const SolverOptions& options = {});

} // namespace pmod
