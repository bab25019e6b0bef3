#pragma once

#include "pmod/family.hpp"
#include "pmod/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pmod {

// Independent exponential edge weights, sigma(e) ~ Exp(rates[e]), so
// E[sigma(e)] = 1/rates[e].  Each trial index gets its own stream: draws
// are reproducible under a fixed seed and independent of trial order.
struct WeightSampler {
    std::vector<double> rates;
    std::uint64_t seed = 0;

    WeightSampler(std::vector<double> rates_, std::uint64_t seed_);
    static WeightSampler uniform(int edge_count, double rate, std::uint64_t seed);

    Density sample(std::uint64_t trial) const;
    Density mean_weights() const;
    double mean_total() const; // E sigma(E) = sum 1/rates
};

struct BoundLine {
    std::string name;     // lovasz | jensen | lower
    std::string relation; // ">=" or "<=" (sample mean vs rhs)
    double rhs = 0.0;
    double z = 0.0; // signed so that pass <=> z >= -3
    bool pass = true;
};

struct MonteCarloReport {
    std::string experiment;
    double p = 1.0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> per_trial;
    double sample_mean = 0.0;
    double sample_sd = 0.0;      // unbiased
    double standard_error = 0.0; // sd / sqrt(T)
    double n_min = 0.0;
    double mean_sigma_total = 0.0;    // E sigma(E)
    double mod_ref = 0.0;             // Mod_{p,E sigma} (p = 2 for lovasz)
    std::vector<BoundLine> bounds;
    double no_contradiction_lhs = 0.0; // Mod_{p,E sigma}
    double no_contradiction_rhs = 0.0; // E sigma(E) / n_min^p
    bool no_contradiction = true;
    bool pass = true;
};

// E Mod_{1,sigma}(Gamma) >= n_min * Mod_{2,E sigma}(Gamma), tested at
// sample mean >= rhs - 3 SE.  Per-trial values use the exact p=1 path.
MonteCarloReport verify_lovasz_bound(const Family& f, const WeightSampler& sampler,
                                     int trials, int jobs = 1,
                                     const SolverOptions& options = {});

// For p in [1,2]: Jensen upper bound E Mod_p <= Mod_{p,E sigma} and the
// lower bound E Mod_p >= (n_min^p / E sigma(E)) * Mod_{p,E sigma}^2, each
// with a 3 SE band.
MonteCarloReport verify_jensen_and_bounds(const Family& f, const WeightSampler& sampler,
                                          double p, int trials, int jobs = 1,
                                          const SolverOptions& options = {});

// Numerically stable order-independent reduction helpers.
double pairwise_sum(const std::vector<double>& x);
void mean_and_se(const std::vector<double>& x, double& mean, double& sd, double& se);

} // namespace pmod
