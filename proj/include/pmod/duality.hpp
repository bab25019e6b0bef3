#pragma once

#include "pmod/blocker.hpp"
#include "pmod/solver.hpp"

namespace pmod {

// sigma_hat(e) = sigma(e)^{-q/p}; at p = 2 this is 1/sigma.
Density dual_weights(const Graph& g, double p);

// eta(e) = sigma(e) rho(e)^{p-1} / value from a converged solution.
Density blocker_density(const ModulusSolution& sol, const Graph& g);

struct DualityProductReport {
    double p = 0.0, q = 0.0;
    double mod_primal = 0.0;  // Mod_{p,sigma}(family)
    double mod_blocker = 0.0; // Mod_{q,sigma_hat}(blocker family)
    double lhs = 0.0;         // mod_primal^{1/p} * mod_blocker^{1/q}
    double rhs = 1.0;
    double residual = 0.0;  // |lhs - rhs|
    double eta_match = 0.0; // sup_e |blocker rho - primal eta|
    ModulusSolution primal;
    ModulusSolution blocker;
};

// Solves both sides of the product identity independently: the family at
// (p, sigma) and its blocker at (q, sigma^{-q/p}).
DualityProductReport verify_duality_product(const Family& f, double p,
                                            const SolverOptions& options = {});

struct EndpointDualityReport {
    double mod1 = 0.0;    // Mod_{1,sigma}(family)
    double mod_inf = 0.0; // Mod_{inf,1/sigma}(blocker family)
    double lhs = 0.0;     // product
    double rhs = 1.0;
    double residual = 0.0;
    ModulusSolution primal;
    ModulusSolution blocker;
};

// Product identity at the endpoints: Mod_1 against the blocker's
// inf-modulus under inverted weights.
EndpointDualityReport verify_p1_pinf_duality(const Family& f,
                                             const SolverOptions& options = {});

// sup_e |eta(e) - sum_gamma pmf(gamma) N(gamma,e)| over the active rows.
double expected_usage_deviation(const ModulusSolution& sol, const Graph& g);

// Relative residual of sum_e sigma_hat(e) (E_mu N)^q against value^{-q/p}.
double pmf_value_identity_residual(const ModulusSolution& sol, const Graph& g);

} // namespace pmod
