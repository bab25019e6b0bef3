#pragma once

#include "pmod/blocker.hpp"
#include "pmod/family.hpp"
#include "pmod/graph.hpp"

#include <vector>

namespace pmod {

// Exhaustive minimum cut over all vertex bipartitions (n <= 24 guard).
// Independent of the flow-based min_cut and used to cross-check it.
double brute_min_cut(const Graph& g, int a, int b);

struct BarrierResult {
    double value = 0.0;       // energy at the interior-point iterate
    double gap = 0.0;         // certified suboptimality, value - gap <= opt <= value
    std::vector<double> rho;
    int newton_steps = 0;
};

// Interior-point minimiser of sum sigma rho^p over {N rho >= 1, rho >= 0}
// for an explicitly listed family, finite p >= 1 (p = 1 is the LP case).
// Log-barrier path following with dense Newton steps; completely
// independent of the constraint-generation solver.
BarrierResult barrier_modulus(const std::vector<UsageRow>& rows, const std::vector<double>& sigma,
                              double p, double tol_gap = 1e-10);
BarrierResult barrier_modulus(const Family& f, double p, std::size_t max_rows = 4096,
                              double tol_gap = 1e-10);

// Whether x is a vertex of {x >= 0, N x >= 1}: the rows active at x,
// restricted to the coordinates where x is nonzero, must have full column
// rank.  tol bounds both activity and zero detection.
bool is_extreme_point(const std::vector<UsageRow>& rows, const std::vector<double>& x,
                      int edge_count, double tol = 1e-7);

// Certified ||rho - rho*||_p bound from energy brackets U >= E(rho) and
// L <= Mod: 2^{(M-1)/M} sigma_min^{-1/p} (U^{M/p} - L^{M/p})^{1/M} with
// M = max(p, q).  Requires rho admissible and 1 < p < inf.
double clarkson_radius(double upper, double lower, double p, double sigma_min);

// Whether a feasible partition's scaled cut vector 1_{E_P}/(k_P - 1) is a
// vertex of the spanning-tree admissible set: the multigraph obtained by
// shrinking every part to a node must be a single block (no cut vertex).
// Otherwise the vector is a convex combination of coarser partitions'
// vectors and is dominated.
bool partition_is_vertex(const Graph& g, const FeasiblePartition& part);

} // namespace pmod
