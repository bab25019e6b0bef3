#pragma once

#include "pmod/solver.hpp"

#include <array>
#include <string>
#include <vector>

namespace pmod {

struct MetricReport {
    std::string kind; // "delta_p" or "mod_inverse"
    double p = 0.0;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> dist; // symmetric, zero diagonal
    double worst_triangle_slack = 0.0;     // min over triples d(a,c)+d(c,b)-d(a,b)
    bool offdiagonal_positive = true;
    // deviations against the classical distances, max over pairs
    double max_rel_dev_resistance = 0.0; // vs effective resistance
    double max_rel_dev_hops = 0.0;       // vs hop count
    double max_rel_dev_inv_mincut = 0.0; // vs 1/MC
    int solves = 0;
    bool all_converged = true;
};

// delta_p(a,b) = Mod_{p,sigma}(connect(a,b))^{-q/p} over all vertex pairs.
MetricReport delta_p_matrix(const Graph& g, double p, const SolverOptions& options = {},
                            int jobs = 1);

// Mod_{p,sigma}(connect(a,b))^{-1} over all pairs; requires 1 < p < 2.
MetricReport mod_inverse_metric(const Graph& g, double p, const SolverOptions& options = {},
                                int jobs = 1);

struct UltrametricReport {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> d_mc; // 1 / min cut
    double worst_slack = 0.0; // min over triples max(d(a,c),d(c,b)) - d(a,b)
    bool pass = true;         // worst_slack >= -1e-12
};

// Max-form triangle inequality for d_MC(a,b) = min_cut(a,b)^{-1}.
UltrametricReport ultrametric_check(const Graph& g);

struct SnowflakeWitness {
    double p = 0.0;
    double epsilon = 0.0;
    std::string graph_description;
    std::array<std::string, 3> triple; // endpoints and the middle vertex
    double d_ab = 0.0, d_bc = 0.0, d_ac = 0.0;
    double lhs = 0.0; // d(a,c)^{1+eps}
    double rhs = 0.0; // d(a,b)^{1+eps} + d(b,c)^{1+eps}
    bool violated = false;
};

// The three-vertex path shows delta_p^{1+eps} breaks the triangle
// inequality for every eps > 0: the middle distances are 1 and the end
// distance is 2 for every p.
SnowflakeWitness anti_snowflake_witness(double p, double epsilon,
                                        const SolverOptions& options = {});

} // namespace pmod
