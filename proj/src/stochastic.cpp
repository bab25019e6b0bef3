#include "pmod/stochastic.hpp"

#include "pmod/errors.hpp"
#include "pmod/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>

namespace pmod {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

WeightSampler::WeightSampler(std::vector<double> rates_, std::uint64_t seed_)
    : rates(std::move(rates_)), seed(seed_) {
    if (rates.empty()) throw ParseError("weight sampler needs at least one rate");
    for (double r : rates)
        if (!(r > 0.0) || !std::isfinite(r))
            throw ParseError("exponential rates must be positive and finite");
}

WeightSampler WeightSampler::uniform(int edge_count, double rate, std::uint64_t seed) {
    if (edge_count <= 0) throw ParseError("weight sampler needs at least one edge");
    return WeightSampler(std::vector<double>(static_cast<std::size_t>(edge_count), rate), seed);
}

Density WeightSampler::sample(std::uint64_t trial) const {
    std::mt19937_64 rng(splitmix64(splitmix64(seed) + trial));
    Density d;
    d.role = DensityRole::primal;
    d.values.resize(rates.size());
    for (std::size_t e = 0; e < rates.size(); ++e) {
        // u in (0,1) strictly, so -log(u) is finite and positive.
        double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
        d.values[e] = -std::log(u) / rates[e];
    }
    return d;
}

Density WeightSampler::mean_weights() const {
    Density d;
    d.role = DensityRole::primal;
    d.values.resize(rates.size());
    for (std::size_t e = 0; e < rates.size(); ++e) d.values[e] = 1.0 / rates[e];
    return d;
}

double WeightSampler::mean_total() const {
    double s = 0.0;
    for (double r : rates) s += 1.0 / r;
    return s;
}

double pairwise_sum(const std::vector<double>& x) {
    // Recursive halving keeps the reduction order-independent.
    std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t lo, std::size_t hi) {
        if (hi - lo <= 8) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += x[i];
            return s;
        }
        std::size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return x.empty() ? 0.0 : rec(0, x.size());
}

void mean_and_se(const std::vector<double>& x, double& mean, double& sd, double& se) {
    std::size_t n = x.size();
    if (n < 2) throw ParseError("sample statistics need at least two values");
    mean = pairwise_sum(x) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
    double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    sd = std::sqrt(std::max(var, 0.0));
    se = sd / std::sqrt(static_cast<double>(n));
}

namespace {

void check_sampler(const Family& f, const WeightSampler& sampler, int trials) {
    if (static_cast<int>(sampler.rates.size()) != f.graph().edge_count())
        throw ParseError("sampler rate count does not match the edge count");
    if (trials < 100) throw ParseError("Monte Carlo experiments need at least 100 trials");
}

BoundLine make_bound(const std::string& name, const std::string& relation, double rhs,
                     double mean, double se) {
    BoundLine line;
    line.name = name;
    line.relation = relation;
    line.rhs = rhs;
    double margin = relation == ">=" ? mean - rhs : rhs - mean;
    if (se > 0.0)
        line.z = margin / se;
    else
        line.z = margin >= 0.0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
    line.pass = line.z >= -3.0;
    return line;
}

// Per-trial modulus at freshly sampled weights; slots are preallocated so
// parallel trials write disjoint entries.
std::vector<double> run_trials(const Family& f, const WeightSampler& sampler, double p,
                               int trials, int jobs, const SolverOptions& options) {
    std::vector<double> vals(static_cast<std::size_t>(trials), 0.0);
    parallel_for(trials, jobs, [&](int t) {
        Density sigma = sampler.sample(static_cast<std::uint64_t>(t));
        Graph g = f.graph().reweighted(sigma);
        Family fb = f.rebind(g);
        vals[static_cast<std::size_t>(t)] = solve(fb, p, options).value;
    });
    return vals;
}

void finish_no_contradiction(MonteCarloReport& rep, const Family& f, double p,
                             double mod_ref_at_p, double mean_total) {
    rep.no_contradiction_lhs = mod_ref_at_p;
    rep.no_contradiction_rhs = mean_total / std::pow(f.n_min(), p);
    rep.no_contradiction = rep.no_contradiction_lhs <= rep.no_contradiction_rhs * (1.0 + 1e-9);
}

} // namespace

MonteCarloReport verify_lovasz_bound(const Family& f, const WeightSampler& sampler,
                                     int trials, int jobs, const SolverOptions& options) {
    check_sampler(f, sampler, trials);
    MonteCarloReport rep;
    rep.experiment = "lovasz";
    rep.p = 1.0;
    rep.trials = trials;
    rep.seed = sampler.seed;
    rep.n_min = f.n_min();
    rep.mean_sigma_total = sampler.mean_total();

    Density mean = sampler.mean_weights();
    Graph gm = f.graph().reweighted(mean);
    Family fm = f.rebind(gm);
    rep.mod_ref = solve(fm, 2.0, options).value;
    ModulusSolution ref1 = solve(fm, 1.0, options);
    finish_no_contradiction(rep, f, 1.0, ref1.value, rep.mean_sigma_total);

    rep.per_trial = run_trials(f, sampler, 1.0, trials, jobs, options);
    mean_and_se(rep.per_trial, rep.sample_mean, rep.sample_sd, rep.standard_error);
    rep.bounds.push_back(make_bound("lovasz", ">=", rep.n_min * rep.mod_ref, rep.sample_mean,
                                    rep.standard_error));
    rep.pass = rep.bounds[0].pass && rep.no_contradiction;
    return rep;
}

MonteCarloReport verify_jensen_and_bounds(const Family& f, const WeightSampler& sampler,
                                          double p, int trials, int jobs,
                                          const SolverOptions& options) {
    check_sampler(f, sampler, trials);
    if (!(p >= 1.0 && p <= 2.0))
        throw ParseError("jensen experiment requires p in [1, 2]");
    MonteCarloReport rep;
    rep.experiment = "jensen_bounds";
    rep.p = p;
    rep.trials = trials;
    rep.seed = sampler.seed;
    rep.n_min = f.n_min();
    rep.mean_sigma_total = sampler.mean_total();

    Density mean = sampler.mean_weights();
    Graph gm = f.graph().reweighted(mean);
    Family fm = f.rebind(gm);
    rep.mod_ref = solve(fm, p, options).value;
    finish_no_contradiction(rep, f, p, rep.mod_ref, rep.mean_sigma_total);

    rep.per_trial = run_trials(f, sampler, p, trials, jobs, options);
    mean_and_se(rep.per_trial, rep.sample_mean, rep.sample_sd, rep.standard_error);
    rep.bounds.push_back(
        make_bound("jensen", "<=", rep.mod_ref, rep.sample_mean, rep.standard_error));
    double lower =
        std::pow(rep.n_min, p) / rep.mean_sigma_total * rep.mod_ref * rep.mod_ref;
    rep.bounds.push_back(make_bound("lower", ">=", lower, rep.sample_mean, rep.standard_error));
    rep.pass = rep.bounds[0].pass && rep.bounds[1].pass && rep.no_contradiction;
    return rep;
}

} // namespace pmod
