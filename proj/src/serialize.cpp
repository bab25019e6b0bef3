#include "pmod/serialize.hpp"

#include <cmath>
#include <sstream>

namespace pmod {

using nlohmann::json;

json json_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

json graph_json(const Graph& g) {
    json j;
    j["directed"] = g.directed();
    j["vertices"] = json::array();
    for (int v = 0; v < g.vertex_count(); ++v) j["vertices"].push_back(g.label(v));
    j["edges"] = json::array();
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        j["edges"].push_back({{"key", g.edge_key(e)},
                              {"tail", g.label(ed.tail)},
                              {"head", g.label(ed.head)},
                              {"weight", ed.weight}});
    }
    return j;
}

namespace {

json density_map(const Graph& g, const std::vector<double>& values) {
    json j = json::object();
    for (int e = 0; e < g.edge_count(); ++e)
        j[g.edge_key(e)] = values[static_cast<std::size_t>(e)];
    return j;
}

} // namespace

json solution_json(const ModulusSolution& sol, const Graph& g) {
    json j;
    j["p"] = json_number(sol.p);
    j["value"] = sol.value;
    j["lower"] = sol.lower;
    j["upper"] = sol.upper;
    j["converged"] = sol.converged;
    j["rho"] = density_map(g, sol.rho.values);
    j["eta"] = density_map(g, sol.eta.values);
    j["pmf"] = json::array();
    for (std::size_t k = 0; k < sol.pmf.size(); ++k)
        j["pmf"].push_back({{"label", sol.active_rows[k].label}, {"prob", sol.pmf[k]}});
    j["lambda_l1"] = sol.lambda_l1;
    j["iterations"] = {{"outer", sol.outer_iterations},
                       {"inner_sweeps", sol.inner_sweeps},
                       {"oracle_calls", sol.oracle_calls}};
    j["admissibility"] = sol.admissibility;
    j["kkt_gap"] = sol.kkt_gap;
    j["quasi_radius"] = json_number(sol.quasi_radius);
    if (sol.blocker_vertex) {
        json v = json::object();
        for (const auto& [e, val] : sol.blocker_vertex->entries) v[g.edge_key(e)] = val;
        j["blocker_vertex"] = {{"label", sol.blocker_vertex->label}, {"coords", v}};
    }
    j["warnings"] = sol.warnings;
    return j;
}

json duality_json(const DualityProductReport& rep, const Graph& g) {
    json j;
    j["p"] = rep.p;
    j["q"] = rep.q;
    j["mod_primal"] = rep.mod_primal;
    j["mod_blocker"] = rep.mod_blocker;
    j["product"] = rep.lhs;
    j["expected"] = rep.rhs;
    j["residual"] = rep.residual;
    j["eta_match"] = rep.eta_match;
    j["primal"] = solution_json(rep.primal, g);
    j["blocker"] = solution_json(rep.blocker, g);
    return j;
}

json endpoint_duality_json(const EndpointDualityReport& rep, const Graph& g) {
    json j;
    j["mod_1"] = rep.mod1;
    j["mod_inf"] = rep.mod_inf;
    j["product"] = rep.lhs;
    j["expected"] = rep.rhs;
    j["residual"] = rep.residual;
    j["primal"] = solution_json(rep.primal, g);
    j["blocker"] = solution_json(rep.blocker, g);
    return j;
}

json blocker_json(const Family& f, const std::vector<BlockerVertex>& vertices) {
    const Graph& g = f.graph();
    json j;
    j["family"] = f.describe();
    j["count"] = vertices.size();
    j["vertices"] = json::array();
    double worst = 0.0;
    for (const auto& v : vertices) {
        Density x;
        x.values = v.coords;
        x.role = DensityRole::blocker;
        double residual = f.shortest_object(x).value - 1.0;
        worst = std::max(worst, std::abs(residual));
        j["vertices"].push_back({{"label", v.label},
                                 {"provenance", provenance_name(v.provenance)},
                                 {"coords", density_map(g, v.coords)},
                                 {"admissibility_residual", residual}});
    }
    j["max_abs_residual"] = worst;
    return j;
}

namespace {

json matrix_json(const std::vector<std::vector<double>>& rows) {
    json j = json::array();
    for (const auto& row : rows) j.push_back(row);
    return j;
}

} // namespace

json metric_json(const MetricReport& rep) {
    json j;
    j["kind"] = rep.kind;
    j["p"] = rep.p;
    j["labels"] = rep.labels;
    j["dist"] = matrix_json(rep.dist);
    j["worst_triangle_slack"] = rep.worst_triangle_slack;
    j["offdiagonal_positive"] = rep.offdiagonal_positive;
    j["max_rel_dev_resistance"] = rep.max_rel_dev_resistance;
    j["max_rel_dev_hops"] = rep.max_rel_dev_hops;
    j["max_rel_dev_inv_mincut"] = rep.max_rel_dev_inv_mincut;
    j["solves"] = rep.solves;
    j["all_converged"] = rep.all_converged;
    return j;
}

json ultrametric_json(const UltrametricReport& rep) {
    json j;
    j["labels"] = rep.labels;
    j["d_mc"] = matrix_json(rep.d_mc);
    j["worst_slack"] = rep.worst_slack;
    j["pass"] = rep.pass;
    return j;
}

json snowflake_json(const SnowflakeWitness& w) {
    json j;
    j["p"] = w.p;
    j["epsilon"] = w.epsilon;
    j["graph"] = w.graph_description;
    j["triple"] = {w.triple[0], w.triple[1], w.triple[2]};
    j["d_ab"] = w.d_ab;
    j["d_bc"] = w.d_bc;
    j["d_ac"] = w.d_ac;
    j["lhs"] = w.lhs;
    j["rhs"] = w.rhs;
    j["violated"] = w.violated;
    return j;
}

json gradient_json(const GradientReport& rep) {
    json j;
    j["p"] = rep.p;
    j["h_rel"] = rep.h_rel;
    j["curvature"] = rep.curvature;
    j["mod"] = rep.mod;
    j["max_rel_dev"] = rep.max_rel_dev;
    j["pass"] = rep.pass;
    j["entries"] = json::array();
    for (const auto& en : rep.entries)
        j["entries"].push_back({{"edge", en.edge_key},
                                {"fd", en.fd},
                                {"analytic", en.analytic},
                                {"abs_dev", en.abs_dev},
                                {"tol", en.tol},
                                {"pass", en.pass}});
    return j;
}

json sweep_json(const SweepReport& rep) {
    json j;
    j["edge"] = rep.edge_key;
    j["p"] = rep.p;
    j["slack"] = rep.slack;
    j["worst_mod_violation"] = rep.worst_mod_violation;
    j["worst_rho_violation"] = rep.worst_rho_violation;
    j["worst_eta_violation"] = rep.worst_eta_violation;
    j["pass"] = rep.pass;
    j["rows"] = json::array();
    for (const auto& r : rep.rows)
        j["rows"].push_back({{"sigma_e", r.sigma_e},
                             {"mod", r.mod},
                             {"rho_e", r.rho_e},
                             {"eta_e", r.eta_e},
                             {"converged", r.converged}});
    return j;
}

json concavity_json(const ConcavityReport& rep) {
    json j;
    j["p"] = rep.p;
    j["mod0"] = rep.mod0;
    j["mod1"] = rep.mod1;
    j["t"] = rep.ts;
    j["slacks"] = rep.slacks;
    j["min_slack"] = rep.min_slack;
    j["allowed"] = rep.allowed;
    j["pass"] = rep.pass;
    return j;
}

json lipschitz_json(const LipschitzReport& rep) {
    json j;
    j["p"] = rep.p;
    j["lhs"] = rep.lhs;
    j["bound"] = rep.bound;
    j["slack"] = rep.slack;
    j["pass"] = rep.pass;
    return j;
}

json monte_carlo_json(const MonteCarloReport& rep, bool include_trials) {
    json j;
    j["experiment"] = rep.experiment;
    j["p"] = rep.p;
    j["trials"] = rep.trials;
    j["seed"] = rep.seed;
    j["sample_mean"] = rep.sample_mean;
    j["sample_sd"] = rep.sample_sd;
    j["standard_error"] = rep.standard_error;
    j["n_min"] = rep.n_min;
    j["mean_sigma_total"] = rep.mean_sigma_total;
    j["mod_reference"] = rep.mod_ref;
    j["bounds"] = json::array();
    for (const auto& b : rep.bounds)
        j["bounds"].push_back({{"name", b.name},
                               {"relation", b.relation},
                               {"rhs", b.rhs},
                               {"z", json_number(b.z)},
                               {"pass", b.pass}});
    j["no_contradiction"] = {{"lhs", rep.no_contradiction_lhs},
                             {"rhs", rep.no_contradiction_rhs},
                             {"pass", rep.no_contradiction}};
    j["pass"] = rep.pass;
    if (include_trials) j["per_trial"] = rep.per_trial;
    return j;
}

std::string metric_csv(const MetricReport& rep) {
    std::ostringstream os;
    os.precision(17);
    os << "from,to,dist\n";
    for (std::size_t i = 0; i < rep.labels.size(); ++i)
        for (std::size_t k = 0; k < rep.labels.size(); ++k)
            os << rep.labels[i] << ',' << rep.labels[k] << ',' << rep.dist[i][k] << '\n';
    return os.str();
}

std::string sweep_csv(const SweepReport& rep) {
    std::ostringstream os;
    os.precision(17);
    os << "sigma_e,mod,rho_e,eta_e,converged\n";
    for (const auto& r : rep.rows)
        os << r.sigma_e << ',' << r.mod << ',' << r.rho_e << ',' << r.eta_e << ','
           << (r.converged ? 1 : 0) << '\n';
    return os.str();
}

std::string dump_report(const nlohmann::json& j) { return j.dump(2) + "\n"; }

} // namespace pmod
