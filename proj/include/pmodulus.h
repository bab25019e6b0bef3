/* C interface to the p-modulus library.  All computation results come back
 * as JSON strings allocated by the library; free them with
 * pmod_string_free.  Handles are opaque; a family borrows its graph, so
 * the graph must stay alive while the family is in use. */
#ifndef PMODULUS_H
#define PMODULUS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pmod_status {
    PMOD_OK = 0,
    PMOD_PARSE_ERROR = 1,
    PMOD_INVALID_ARGUMENT = 2,
    PMOD_FAMILY_EMPTY = 3,
    PMOD_GUARD_EXCEEDED = 4,
    PMOD_UNSUPPORTED = 5,
    PMOD_NOT_CONVERGED = 6, /* report JSON is still produced */
    PMOD_STOCHASTIC_FAIL = 7, /* report JSON is still produced */
    PMOD_INTERNAL_ERROR = 8
} pmod_status;

typedef struct pmod_graph pmod_graph;
typedef struct pmod_family pmod_family;

const char* pmod_version(void);
/* Message for the last failing call on this thread. */
const char* pmod_last_error(void);
void pmod_string_free(char* s);

/* format: "edge-list", "json", or "auto" (by .json extension / leading
 * '{').  `directed` only applies to edge lists. */
pmod_status pmod_graph_load_file(const char* path, const char* format, int directed,
                                 pmod_graph** out);
pmod_status pmod_graph_parse(const char* text, const char* format, int directed,
                             pmod_graph** out);
void pmod_graph_free(pmod_graph* g);
int pmod_graph_vertex_count(const pmod_graph* g);
int pmod_graph_edge_count(const pmod_graph* g);
pmod_status pmod_graph_json(const pmod_graph* g, char** out_json);

/* spec: "connect:a,b", "cut:a,b", "spanning-tree", or "explicit:<json>". */
pmod_status pmod_family_create(const pmod_graph* g, const char* spec, pmod_family** out);
void pmod_family_free(pmod_family* f);

typedef struct pmod_solve_options {
    double rel_tol;        /* <= 0 selects the default 1e-6 */
    double adm_tol;        /* <= 0 selects the default 1e-8 */
    int max_outer;         /* <= 0 selects the default */
    long max_inner_sweeps; /* <= 0 selects the default */
    int polish;            /* nonzero enables Newton refinement (default on) */
} pmod_solve_options;

/* p may be any value >= 1 including INFINITY. */
pmod_status pmod_solve(const pmod_family* f, double p, const pmod_solve_options* opts,
                       char** out_json);

/* p in (1, inf): product identity at (p, sigma) x (q, sigma^{-q/p}).
 * p == 1: endpoint identity against the blocker's inf-modulus. */
pmod_status pmod_duality_report(const pmod_family* f, double p,
                                const pmod_solve_options* opts, char** out_json);

pmod_status pmod_blocker_report(const pmod_family* f, char** out_json);

/* kind: "delta_p" (any finite p > 1) or "mod_inverse" (1 < p < 2). */
pmod_status pmod_metric_report(const pmod_graph* g, const char* kind, double p, int jobs,
                               const pmod_solve_options* opts, char** out_json);
pmod_status pmod_metric_csv(const pmod_graph* g, const char* kind, double p, int jobs,
                            const pmod_solve_options* opts, char** out_csv);
pmod_status pmod_ultrametric_report(const pmod_graph* g, char** out_json);
pmod_status pmod_snowflake_report(double p, double epsilon, char** out_json);

/* Bundle of gradient check, a monotonicity sweep on `edge` (negative
 * selects edge 0), and a seeded concavity/Lipschitz segment pair. */
pmod_status pmod_sensitivity_report(const pmod_family* f, double p, int edge,
                                    unsigned long long seed, char** out_json);

/* experiment: "lovasz" (p ignored) or "jensen" (1 <= p <= 2).  All edges
 * share the exponential rate. */
pmod_status pmod_random_report(const pmod_family* f, const char* experiment, double p,
                               double rate, int trials, unsigned long long seed, int jobs,
                               char** out_json);

/* Runs the acceptance suite; progress lines go to stderr when
 * stream_progress is nonzero.  Returns PMOD_STOCHASTIC_FAIL-style codes
 * only for internal errors; criterion failures are reported in the JSON. */
pmod_status pmod_acceptance_run(int jobs, int stream_progress, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* PMODULUS_H */
