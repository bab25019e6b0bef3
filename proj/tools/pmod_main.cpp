// Command-line front end.  All computation goes through the C interface;
// this translation unit only parses arguments, assembles report envelopes,
// and maps status codes onto exit codes.
#include "pmodulus.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <thread>

namespace {

using nlohmann::json;

enum class LogLevel { quiet, info, debug };

LogLevel log_level() {
    const char* v = std::getenv("PMOD_LOG");
    if (!v) return LogLevel::info;
    std::string s = v;
    if (s == "quiet") return LogLevel::quiet;
    if (s == "debug") return LogLevel::debug;
    return LogLevel::info;
}

int status_to_exit(pmod_status s) {
    switch (s) {
        case PMOD_OK: return 0;
        case PMOD_PARSE_ERROR:
        case PMOD_INVALID_ARGUMENT:
        case PMOD_FAMILY_EMPTY:
        case PMOD_UNSUPPORTED: return 2;
        case PMOD_NOT_CONVERGED: return 3;
        case PMOD_GUARD_EXCEEDED: return 4;
        case PMOD_STOCHASTIC_FAIL: return 5;
        default: return 1;
    }
}

double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "Inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        double p = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return p;
    } catch (const std::exception&) {
        std::cerr << "error: cannot parse exponent p from '" << s << "'\n";
        std::exit(2);
    }
}

struct Args {
    std::string graph_path;
    std::string format = "auto";
    bool directed = false;
    std::string family = "connect:a,b";
    std::string p = "2";
    std::string output;
    unsigned long long seed = 0;
    int jobs = 0;
    bool csv = false;

    double rel_tol = 0.0;
    double adm_tol = 0.0;
    int max_outer = 0;
    long max_inner = 0;
    bool no_polish = false;

    // subcommand-specific
    std::string kind = "delta_p";
    std::string experiment = "lovasz";
    int trials = 5000;
    double rate = 1.0;
    double epsilon = 0.1;
    int edge = -1;
    bool snowflake = false;
    bool ultrametric = false;
};

pmod_solve_options make_options(const Args& a) {
    pmod_solve_options o;
    o.rel_tol = a.rel_tol;
    o.adm_tol = a.adm_tol;
    o.max_outer = a.max_outer;
    o.max_inner_sweeps = a.max_inner;
    o.polish = a.no_polish ? 0 : 1;
    return o;
}

int effective_jobs(const Args& a) {
    if (a.jobs > 0) return a.jobs;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

struct GraphHandle {
    pmod_graph* g = nullptr;
    ~GraphHandle() { pmod_graph_free(g); }
};

struct FamilyHandle {
    pmod_family* f = nullptr;
    ~FamilyHandle() { pmod_family_free(f); }
};

struct OwnedString {
    char* s = nullptr;
    ~OwnedString() { pmod_string_free(s); }
};

[[noreturn]] void die(pmod_status rc) {
    std::cerr << "error: " << pmod_last_error() << "\n";
    std::exit(status_to_exit(rc));
}

pmod_graph* load_graph(const Args& a) {
    if (a.graph_path.empty()) {
        std::cerr << "error: --graph is required\n";
        std::exit(2);
    }
    pmod_graph* g = nullptr;
    pmod_status rc = pmod_graph_load_file(a.graph_path.c_str(), a.format.c_str(),
                                          a.directed ? 1 : 0, &g);
    if (rc != PMOD_OK) die(rc);
    return g;
}

pmod_family* make_family(const Args& a, pmod_graph* g) {
    pmod_family* f = nullptr;
    pmod_status rc = pmod_family_create(g, a.family.c_str(), &f);
    if (rc != PMOD_OK) die(rc);
    return f;
}

json config_echo(const std::string& command, const Args& a) {
    json c;
    c["command"] = command;
    if (!a.graph_path.empty()) {
        c["graph"] = a.graph_path;
        c["format"] = a.format;
        c["directed"] = a.directed;
    }
    c["family"] = a.family;
    c["p"] = a.p;
    c["seed"] = a.seed;
    c["jobs"] = effective_jobs(a);
    c["csv"] = a.csv;
    c["tolerances"] = {{"rel_tol", a.rel_tol > 0 ? a.rel_tol : 1e-6},
                       {"adm_tol", a.adm_tol > 0 ? a.adm_tol : 1e-8},
                       {"polish", !a.no_polish}};
    return c;
}

// JSON to --output (or standard output); summary to the other stream.
void deliver(const std::string& text, const Args& a, const std::string& summary) {
    bool to_file = !a.output.empty();
    if (to_file) {
        std::ofstream out(a.output);
        if (!out) {
            std::cerr << "error: cannot write " << a.output << "\n";
            std::exit(2);
        }
        out << text;
    } else {
        std::cout << text;
    }
    if (log_level() != LogLevel::quiet && !summary.empty()) {
        std::ostream& os = to_file ? std::cout : std::cerr;
        os << summary << "\n";
    }
}

int finish(const std::string& command, const Args& a, pmod_status rc, const char* raw,
           double seconds, const std::string& summary) {
    if (!raw) die(rc);
    json envelope;
    envelope["version"] = pmod_version();
    envelope["config"] = config_echo(command, a);
    envelope["seconds"] = seconds;
    envelope["report"] = json::parse(raw);
    deliver(envelope.dump(2) + "\n", a, summary);
    return status_to_exit(rc);
}

double timed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(9);
    os << x;
    return os.str();
}

int cmd_solve(const Args& a) {
    GraphHandle g{load_graph(a)};
    FamilyHandle f{make_family(a, g.g)};
    pmod_solve_options opts = make_options(a);
    OwnedString out;
    auto t0 = std::chrono::steady_clock::now();
    pmod_status rc = pmod_solve(f.f, parse_p(a.p), &opts, &out.s);
    if (rc != PMOD_OK && rc != PMOD_NOT_CONVERGED) die(rc);
    json rep = json::parse(out.s);
    std::string summary = "modulus " + fmt(rep["value"].get<double>()) + " in [" +
                          fmt(rep["lower"].get<double>()) + ", " +
                          fmt(rep["upper"].get<double>()) + "] converged=" +
                          (rep["converged"].get<bool>() ? "true" : "false");
    return finish("solve", a, rc, out.s, timed_since(t0), summary);
}

int cmd_duality(const Args& a) {
    GraphHandle g{load_graph(a)};
    FamilyHandle f{make_family(a, g.g)};
    pmod_solve_options opts = make_options(a);
    OwnedString out;
    auto t0 = std::chrono::steady_clock::now();
    pmod_status rc = pmod_duality_report(f.f, parse_p(a.p), &opts, &out.s);
    if (rc != PMOD_OK) die(rc);
    json rep = json::parse(out.s);
    std::string summary = "duality product " + fmt(rep["product"].get<double>()) +
                          " residual " + fmt(rep["residual"].get<double>());
    return finish("duality", a, rc, out.s, timed_since(t0), summary);
}

int cmd_blocker(const Args& a) {
    GraphHandle g{load_graph(a)};
    FamilyHandle f{make_family(a, g.g)};
    OwnedString out;
    auto t0 = std::chrono::steady_clock::now();
    pmod_status rc = pmod_blocker_report(f.f, &out.s);
    if (rc != PMOD_OK) die(rc);
    json rep = json::parse(out.s);
    std::string summary = std::to_string(rep["count"].get<int>()) +
                          " blocker vertices, max residual " +
                          fmt(rep["max_abs_residual"].get<double>());
    return finish("blocker", a, rc, out.s, timed_since(t0), summary);
}

int cmd_metric(const Args& a) {
    GraphHandle g{load_graph(a)};
    pmod_solve_options opts = make_options(a);
    OwnedString out;
    auto t0 = std::chrono::steady_clock::now();
    if (a.ultrametric) {
        pmod_status rc = pmod_ultrametric_report(g.g, &out.s);
        if (rc != PMOD_OK) die(rc);
        json rep = json::parse(out.s);
        std::string summary = std::string("ultrametric ") +
                              (rep["pass"].get<bool>() ? "holds" : "violated") +
                              ", worst slack " + fmt(rep["worst_slack"].get<double>());
        return finish("metric", a, rc, out.s, timed_since(t0), summary);
    }
    if (a.snowflake) {
        pmod_status rc = pmod_snowflake_report(parse_p(a.p), a.epsilon, &out.s);
        if (rc != PMOD_OK) die(rc);
        json rep = json::parse(out.s);
        std::string summary = std::string("snowflake triangle inequality ") +
                              (rep["violated"].get<bool>() ? "violated (witness found)"
                                                           : "not violated");
        return finish("metric", a, rc, out.s, timed_since(t0), summary);
    }
    if (a.csv) {
        pmod_status rc = pmod_metric_csv(g.g, a.kind.c_str(), parse_p(a.p),
                                         effective_jobs(a), &opts, &out.s);
        if (rc != PMOD_OK) die(rc);
        deliver(out.s, a, "");
        return 0;
    }
    pmod_status rc =
        pmod_metric_report(g.g, a.kind.c_str(), parse_p(a.p), effective_jobs(a), &opts, &out.s);
    if (rc != PMOD_OK) die(rc);
    json rep = json::parse(out.s);
    std::string summary = a.kind + " over " + std::to_string(rep["labels"].size()) +
                          " vertices, worst triangle slack " +
                          fmt(rep["worst_triangle_slack"].get<double>());
    return finish("metric", a, rc, out.s, timed_since(t0), summary);
}

int cmd_sensitivity(const Args& a) {
    GraphHandle g{load_graph(a)};
    FamilyHandle f{make_family(a, g.g)};
    OwnedString out;
    auto t0 = std::chrono::steady_clock::now();
    pmod_status rc = pmod_sensitivity_report(f.f, parse_p(a.p), a.edge, a.seed, &out.s);
    if (rc != PMOD_OK) die(rc);
    json rep = json::parse(out.s);
    if (a.csv) {
        std::ostringstream os;
        os.precision(17);
        os << "sigma_e,mod,rho_e,eta_e,converged\n";
        for (const auto& r : rep["monotonicity"]["rows"])
            os << r["sigma_e"].get<double>() << ',' << r["mod"].get<double>() << ','
               << r["rho_e"].get<double>() << ',' << r["eta_e"].get<double>() << ','
               << (r["converged"].get<bool>() ? 1 : 0) << '\n';
        deliver(os.str(), a, "");
        return 0;
    }
    auto flag = [&](const char* key) {
        return rep[key]["pass"].get<bool>() ? std::string("pass") : std::string("FAIL");
    };
    std::string summary = "gradient " + flag("gradient") + ", monotonicity " +
                          flag("monotonicity") + ", concavity " + flag("concavity") +
                          ", lipschitz " + flag("lipschitz");
    return finish("sensitivity", a, rc, out.s, timed_since(t0), summary);
}

int cmd_random(const Args& a) {
    GraphHandle g{load_graph(a)};
    FamilyHandle f{make_family(a, g.g)};
    OwnedString out;
    auto t0 = std::chrono::steady_clock::now();
    pmod_status rc = pmod_random_report(f.f, a.experiment.c_str(), parse_p(a.p), a.rate,
                                        a.trials, a.seed, effective_jobs(a), &out.s);
    if (rc != PMOD_OK && rc != PMOD_STOCHASTIC_FAIL) die(rc);
    json rep = json::parse(out.s);
    std::string summary = a.experiment + " mean " + fmt(rep["sample_mean"].get<double>()) +
                          " se " + fmt(rep["standard_error"].get<double>()) +
                          (rep["pass"].get<bool>() ? " pass" : " FAIL") + " (seed " +
                          std::to_string(a.seed) + ")";
    return finish("random", a, rc, out.s, timed_since(t0), summary);
}

int cmd_verify(const Args& a) {
    OwnedString out;
    auto t0 = std::chrono::steady_clock::now();
    int progress = log_level() == LogLevel::quiet ? 0 : 1;
    pmod_status rc = pmod_acceptance_run(effective_jobs(a), progress, &out.s);
    if (rc != PMOD_OK) die(rc);
    json rep = json::parse(out.s);
    bool pass = rep["pass"].get<bool>();
    std::string summary = std::string("acceptance: ") + (pass ? "PASS" : "FAIL") + " (" +
                          fmt(rep["seconds"].get<double>()) + "s)";
    int rc_exit = finish("verify", a, rc, out.s, timed_since(t0), summary);
    return pass ? rc_exit : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-modulus of object families on graphs"};
    app.require_subcommand(1);
    Args a;

    auto add_common = [&](CLI::App* cmd, bool with_family, bool with_tols) {
        cmd->add_option("--graph", a.graph_path, "graph file (edge list or JSON)");
        cmd->add_option("--graph-format", a.format, "edge-list | json | auto")
            ->check(CLI::IsMember({"edge-list", "json", "auto"}));
        cmd->add_flag("--directed", a.directed, "treat edge list as directed");
        if (with_family)
            cmd->add_option("--family", a.family,
                            "connect:a,b | cut:a,b | spanning-tree | explicit:<json>");
        cmd->add_option("--p", a.p, "exponent, a number >= 1 or 'inf'");
        cmd->add_option("--output", a.output, "write the report here instead of stdout");
        cmd->add_option("--seed", a.seed, "random seed (default 0)");
        cmd->add_option("--jobs", a.jobs, "worker threads (default: available cores)");
        if (with_tols) {
            cmd->add_option("--rel-tol", a.rel_tol, "duality-gap tolerance (default 1e-6)");
            cmd->add_option("--adm-tol", a.adm_tol, "admissibility slack (default 1e-8)");
            cmd->add_option("--max-outer", a.max_outer, "outer iteration cap");
            cmd->add_option("--max-inner-sweeps", a.max_inner, "coordinate sweep cap");
            cmd->add_flag("--no-polish", a.no_polish, "disable Newton refinement");
        }
    };

    auto* solve = app.add_subcommand("solve", "compute the p-modulus of a family");
    add_common(solve, true, true);

    auto* duality = app.add_subcommand("duality", "verify the blocker product identity");
    add_common(duality, true, true);

    auto* blocker = app.add_subcommand("blocker", "enumerate blocker vertices");
    add_common(blocker, true, false);

    auto* metric = app.add_subcommand("metric", "pairwise modulus-derived distances");
    add_common(metric, false, true);
    metric->add_option("--kind", a.kind, "delta_p | mod_inverse")
        ->check(CLI::IsMember({"delta_p", "mod_inverse"}));
    metric->add_flag("--csv", a.csv, "emit the distance table as CSV");
    metric->add_flag("--ultrametric", a.ultrametric, "check 1/min-cut ultrametric instead");
    metric->add_flag("--snowflake", a.snowflake, "emit the anti-snowflake witness instead");
    metric->add_option("--epsilon", a.epsilon, "snowflake exponent offset (default 0.1)");

    auto* sens = app.add_subcommand("sensitivity", "weight-derivative checks");
    add_common(sens, true, true);
    sens->add_option("--edge", a.edge, "edge index for the monotonicity sweep (default 0)");
    sens->add_flag("--csv", a.csv, "emit the sweep table as CSV");

    auto* random = app.add_subcommand("random", "Monte Carlo bound experiments");
    add_common(random, true, false);
    random->add_option("--experiment", a.experiment, "lovasz | jensen")
        ->check(CLI::IsMember({"lovasz", "jensen"}));
    random->add_option("--trials", a.trials, "trial count (default 5000)");
    random->add_option("--rate", a.rate, "exponential rate for all edges (default 1)");

    auto* verify = app.add_subcommand("verify", "run the full acceptance suite");
    add_common(verify, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(a);
        if (duality->parsed()) return cmd_duality(a);
        if (blocker->parsed()) return cmd_blocker(a);
        if (metric->parsed()) return cmd_metric(a);
        if (sens->parsed()) return cmd_sensitivity(a);
        if (random->parsed()) return cmd_random(a);
        if (verify->parsed()) return cmd_verify(a);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
