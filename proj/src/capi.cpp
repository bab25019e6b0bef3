#include "pmodulus.h"

#include "pmod/acceptance.hpp"
#include "pmod/blocker.hpp"
#include "pmod/duality.hpp"
#include "pmod/errors.hpp"
#include "pmod/metrics.hpp"
#include "pmod/sensitivity.hpp"
#include "pmod/serialize.hpp"
#include "pmod/solver.hpp"
#include "pmod/stochastic.hpp"

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

struct pmod_graph {
    pmod::Graph g;
};

struct pmod_family {
    pmod::Family f;
};

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

pmod_status fail(pmod_status s, const std::string& msg) {
    t_last_error = msg;
    return s;
}

// Runs fn, translating the library's exception hierarchy onto status codes.
template <typename Fn>
pmod_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const pmod::GuardError& e) {
        return fail(PMOD_GUARD_EXCEEDED, e.what());
    } catch (const pmod::UnsupportedError& e) {
        return fail(PMOD_UNSUPPORTED, e.what());
    } catch (const pmod::FamilyEmptyError& e) {
        return fail(PMOD_FAMILY_EMPTY, e.what());
    } catch (const pmod::ParseError& e) {
        return fail(PMOD_PARSE_ERROR, e.what());
    } catch (const std::exception& e) {
        return fail(PMOD_INTERNAL_ERROR, e.what());
    }
}

pmod::SolverOptions to_options(const pmod_solve_options* opts) {
    pmod::SolverOptions o;
    if (!opts) return o;
    if (opts->rel_tol > 0.0) o.rel_tol = opts->rel_tol;
    if (opts->adm_tol > 0.0) o.adm_tol = opts->adm_tol;
    if (opts->max_outer > 0) o.max_outer = opts->max_outer;
    if (opts->max_inner_sweeps > 0) o.max_inner_sweeps = opts->max_inner_sweeps;
    o.polish = opts->polish != 0;
    return o;
}

pmod_status emit(char** out, const nlohmann::json& j) {
    *out = dup_string(pmod::dump_report(j));
    return *out ? PMOD_OK : fail(PMOD_INTERNAL_ERROR, "out of memory");
}

std::string detect_format(const std::string& hint, const std::string& name_or_text,
                          bool is_path) {
    if (hint != "auto" && !hint.empty()) return hint;
    if (is_path)
        return name_or_text.size() >= 5 &&
                       name_or_text.compare(name_or_text.size() - 5, 5, ".json") == 0
                   ? "json"
                   : "edge-list";
    for (char c : name_or_text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? "json" : "edge-list";
    }
    return "edge-list";
}

pmod_status metric_report_impl(const pmod_graph* g, const char* kind, double p, int jobs,
                               const pmod_solve_options* opts, char** out, bool csv) {
    if (!g || !kind || !out) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::string k = kind;
        pmod::MetricReport rep;
        if (k == "delta_p")
            rep = pmod::delta_p_matrix(g->g, p, to_options(opts), jobs);
        else if (k == "mod_inverse")
            rep = pmod::mod_inverse_metric(g->g, p, to_options(opts), jobs);
        else
            throw pmod::ParseError("unknown metric kind: " + k);
        if (csv) {
            *out = dup_string(pmod::metric_csv(rep));
            return *out ? PMOD_OK : fail(PMOD_INTERNAL_ERROR, "out of memory");
        }
        return emit(out, pmod::metric_json(rep));
    });
}

} // namespace

extern "C" {

const char* pmod_version(void) { return "0.1.0"; }

const char* pmod_last_error(void) { return t_last_error.c_str(); }

void pmod_string_free(char* s) { std::free(s); }

pmod_status pmod_graph_load_file(const char* path, const char* format, int directed,
                                 pmod_graph** out) {
    if (!path || !out) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ifstream in(path);
        if (!in) throw pmod::ParseError(std::string("cannot open graph file: ") + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string fmt = detect_format(format ? format : "auto", path, true);
        *out = new pmod_graph{pmod::Graph::load(buf.str(), fmt, directed != 0)};
        return PMOD_OK;
    });
}

pmod_status pmod_graph_parse(const char* text, const char* format, int directed,
                             pmod_graph** out) {
    if (!text || !out) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::string fmt = detect_format(format ? format : "auto", text, false);
        *out = new pmod_graph{pmod::Graph::load(text, fmt, directed != 0)};
        return PMOD_OK;
    });
}

void pmod_graph_free(pmod_graph* g) { delete g; }

int pmod_graph_vertex_count(const pmod_graph* g) { return g ? g->g.vertex_count() : -1; }

int pmod_graph_edge_count(const pmod_graph* g) { return g ? g->g.edge_count() : -1; }

pmod_status pmod_graph_json(const pmod_graph* g, char** out_json) {
    if (!g || !out_json) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] { return emit(out_json, pmod::graph_json(g->g)); });
}

pmod_status pmod_family_create(const pmod_graph* g, const char* spec, pmod_family** out) {
    if (!g || !spec || !out) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new pmod_family{pmod::Family::from_spec(g->g, spec)};
        return PMOD_OK;
    });
}

void pmod_family_free(pmod_family* f) { delete f; }

pmod_status pmod_solve(const pmod_family* f, double p, const pmod_solve_options* opts,
                       char** out_json) {
    if (!f || !out_json) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        pmod::ModulusSolution sol = pmod::solve(f->f, p, to_options(opts));
        pmod_status rc = emit(out_json, pmod::solution_json(sol, f->f.graph()));
        if (rc != PMOD_OK) return rc;
        if (!sol.converged) return fail(PMOD_NOT_CONVERGED, "tolerance not reached");
        return PMOD_OK;
    });
}

pmod_status pmod_duality_report(const pmod_family* f, double p,
                                const pmod_solve_options* opts, char** out_json) {
    if (!f || !out_json) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        if (p == 1.0) {
            pmod::EndpointDualityReport rep =
                pmod::verify_p1_pinf_duality(f->f, to_options(opts));
            return emit(out_json, pmod::endpoint_duality_json(rep, f->f.graph()));
        }
        pmod::DualityProductReport rep =
            pmod::verify_duality_product(f->f, p, to_options(opts));
        return emit(out_json, pmod::duality_json(rep, f->f.graph()));
    });
}

pmod_status pmod_blocker_report(const pmod_family* f, char** out_json) {
    if (!f || !out_json) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto vertices = pmod::enumerate_blocker_vertices(f->f);
        return emit(out_json, pmod::blocker_json(f->f, vertices));
    });
}

pmod_status pmod_metric_report(const pmod_graph* g, const char* kind, double p, int jobs,
                               const pmod_solve_options* opts, char** out_json) {
    return metric_report_impl(g, kind, p, jobs, opts, out_json, false);
}

pmod_status pmod_metric_csv(const pmod_graph* g, const char* kind, double p, int jobs,
                            const pmod_solve_options* opts, char** out_csv) {
    return metric_report_impl(g, kind, p, jobs, opts, out_csv, true);
}

pmod_status pmod_ultrametric_report(const pmod_graph* g, char** out_json) {
    if (!g || !out_json) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded(
        [&] { return emit(out_json, pmod::ultrametric_json(pmod::ultrametric_check(g->g))); });
}

pmod_status pmod_snowflake_report(double p, double epsilon, char** out_json) {
    if (!out_json) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        return emit(out_json, pmod::snowflake_json(pmod::anti_snowflake_witness(p, epsilon)));
    });
}

pmod_status pmod_sensitivity_report(const pmod_family* f, double p, int edge,
                                    unsigned long long seed, char** out_json) {
    if (!f || !out_json) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const pmod::Graph& g = f->f.graph();
        nlohmann::json j;
        j["gradient"] = pmod::gradient_json(pmod::gradient_check(f->f, p));

        int e = edge < 0 ? 0 : edge;
        double base = g.sigma()[e];
        pmod::SweepReport sweep = pmod::monotonicity_sweep(
            f->f, p, e, {0.5 * base, 0.8 * base, base, 1.5 * base, 2.5 * base});
        j["monotonicity"] = pmod::sweep_json(sweep);

        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> wdist(0.5, 2.0);
        pmod::Density s0 = g.sigma(), s1 = g.sigma();
        for (auto& v : s0.values) v = wdist(rng);
        for (auto& v : s1.values) v = wdist(rng);
        j["concavity"] = pmod::concavity_json(pmod::concavity_check(f->f, p, s0, s1));
        j["lipschitz"] = pmod::lipschitz_json(pmod::lipschitz_witness(f->f, p, s0, s1));
        return emit(out_json, j);
    });
}

pmod_status pmod_random_report(const pmod_family* f, const char* experiment, double p,
                               double rate, int trials, unsigned long long seed, int jobs,
                               char** out_json) {
    if (!f || !experiment || !out_json) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        pmod::WeightSampler sampler =
            pmod::WeightSampler::uniform(f->f.graph().edge_count(), rate, seed);
        std::string exp = experiment;
        pmod::MonteCarloReport rep;
        if (exp == "lovasz")
            rep = pmod::verify_lovasz_bound(f->f, sampler, trials, jobs);
        else if (exp == "jensen")
            rep = pmod::verify_jensen_and_bounds(f->f, sampler, p, trials, jobs);
        else
            throw pmod::ParseError("unknown experiment: " + exp);
        pmod_status rc = emit(out_json, pmod::monte_carlo_json(rep));
        if (rc != PMOD_OK) return rc;
        if (!rep.pass) return fail(PMOD_STOCHASTIC_FAIL, "bound assertion failed");
        return PMOD_OK;
    });
}

pmod_status pmod_acceptance_run(int jobs, int stream_progress, char** out_json) {
    if (!out_json) return fail(PMOD_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        pmod::AcceptanceReport rep =
            pmod::run_acceptance(stream_progress ? &std::cerr : nullptr, jobs);
        return emit(out_json, pmod::acceptance_json(rep));
    });
}

} // extern "C"
