/* gossipage — version age of clustered gossip networks.
 *
 * C interface to the solver library. All entry points return a ga_status
 * (or NULL for failed constructors) and leave a human-readable message in
 * ga_last_error(), which is thread local. Handles returned by *_create /
 * *_run functions are owned by the caller and released with the matching
 * *_free function.
 */
#ifndef GOSSIPAGE_H
#define GOSSIPAGE_H

#include <stdint.h>

#if defined(_WIN32)
#define GOSSIPAGE_API __declspec(dllexport)
#else
#define GOSSIPAGE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ga_status {
  GA_OK = 0,
  GA_ERR_INVALID = 1, /* null handle, unknown enum or name, bad buffer */
  GA_ERR_SPEC = 2,    /* scenario invariant violated */
  GA_ERR_EVAL = 3,    /* evaluation failed (oracle cap, degenerate fit, ...) */
  GA_ERR_NOMEM = 4
} ga_status;

GOSSIPAGE_API const char* ga_last_error(void);
GOSSIPAGE_API const char* ga_version(void);

typedef enum ga_cluster_topology {
  GA_CLUSTER_DISCONNECTED = 0,
  GA_CLUSTER_UNI_RING = 1,
  GA_CLUSTER_RING = 2,
  GA_CLUSTER_FULLY_CONNECTED = 3
} ga_cluster_topology;

typedef enum ga_head_topology {
  GA_HEADS_DISCONNECTED = 0,
  GA_HEADS_RING = 1
} ga_head_topology;

typedef enum ga_rate_field {
  GA_RATE_LAMBDA_E = 0,
  GA_RATE_LAMBDA_S = 1,
  GA_RATE_LAMBDA_C = 2,
  GA_RATE_LAMBDA_CA = 3,
  GA_RATE_LAMBDA_CB = 4,
  GA_RATE_LAMBDA = 5,
  GA_RATE_LAMBDA_A = 6,
  GA_RATE_LAMBDA_B = 7
} ga_rate_field;

/* ---- rates ---------------------------------------------------------- */

typedef struct ga_rates ga_rates;

GOSSIPAGE_API ga_rates* ga_rates_create(void);
/* Named bundles: fig4a..fig4d, fig5, table2-no-gossip, table2-gossip, table3. */
GOSSIPAGE_API ga_rates* ga_rates_preset(const char* name);
GOSSIPAGE_API ga_status ga_rates_set(ga_rates* rates, ga_rate_field field, double value);
/* GA_ERR_INVALID when the field is unset. */
GOSSIPAGE_API ga_status ga_rates_get(const ga_rates* rates, ga_rate_field field,
                                     double* value);
GOSSIPAGE_API void ga_rates_free(ga_rates* rates);

/* ---- scenarios ------------------------------------------------------ */

typedef struct ga_spec ga_spec;

GOSSIPAGE_API ga_spec* ga_spec_flat(long long n, long long m, long long k,
                                    ga_cluster_topology cluster_topology,
                                    ga_head_topology head_topology,
                                    const ga_rates* rates);
GOSSIPAGE_API ga_spec* ga_spec_hierarchical(long long h, const long long* k_levels,
                                            const ga_rates* rates);
GOSSIPAGE_API ga_status ga_spec_validate(const ga_spec* spec);
GOSSIPAGE_API void ga_spec_free(ga_spec* spec);

/* ---- exact and approximate solvers ---------------------------------- */

typedef struct ga_age_report {
  double head_age; /* first tier below the source */
  double user_age; /* end users */
} ga_age_report;

GOSSIPAGE_API ga_status ga_solve(const ga_spec* spec, ga_age_report* out);
/* Hierarchies: exact age per level (capacity >= h). Flat scenarios report
 * two levels: heads then users. */
GOSSIPAGE_API ga_status ga_solve_levels(const ga_spec* spec, double* levels,
                                        long long capacity, long long* count);
/* Closed-form approximation of the end-user age. */
GOSSIPAGE_API ga_status ga_approx(const ga_spec* spec, double* out);

/* ---- Monte Carlo simulation ----------------------------------------- */

typedef struct ga_sim_config {
  double horizon;       /* <= 0: 1e5 */
  double warmup;        /* < 0: horizon/10 */
  int replications;     /* <= 0: 20 */
  uint64_t master_seed; /* replications derive seeds from this counter */
  int threads;          /* 0: hardware concurrency */
} ga_sim_config;

typedef struct ga_sim_estimate {
  double mean_age; /* end users, replication average */
  double std_err;
  double ci_lo;
  double ci_hi;
  double head_mean; /* first tier below the source */
  uint64_t events;
  int replications;
} ga_sim_estimate;

/* config and trace_path may be NULL; a non-NULL trace_path dumps replication
 * 0's events as "time edge version" lines. */
GOSSIPAGE_API ga_status ga_simulate(const ga_spec* spec, const ga_sim_config* config,
                                    const char* trace_path, ga_sim_estimate* out);

/* ---- cluster-size sweeps -------------------------------------------- */

typedef struct ga_sweep ga_sweep;

typedef struct ga_sweep_row {
  long long k;
  long long m;
  double head_age;
  double user_age;
} ga_sweep_row;

GOSSIPAGE_API ga_sweep* ga_sweep_run(long long n, ga_cluster_topology cluster_topology,
                                     ga_head_topology head_topology,
                                     const ga_rates* rates);
GOSSIPAGE_API long long ga_sweep_size(const ga_sweep* sweep);
GOSSIPAGE_API ga_status ga_sweep_row_get(const ga_sweep* sweep, long long index,
                                         ga_sweep_row* out);
GOSSIPAGE_API long long ga_sweep_argmin_size(const ga_sweep* sweep);
/* Returns the tied-optimal k at `index`, or -1 when out of range. */
GOSSIPAGE_API long long ga_sweep_argmin_get(const ga_sweep* sweep, long long index);
GOSSIPAGE_API void ga_sweep_free(ga_sweep* sweep);

/* ---- head rate split ------------------------------------------------- */

GOSSIPAGE_API ga_status ga_kkt_rate_split(double lambda_c, double lambda_s,
                                          double lambda, double* lambda_ca,
                                          double* lambda_cb);
GOSSIPAGE_API ga_status ga_numeric_rate_split(double lambda_c, double lambda_s,
                                              double lambda, double* lambda_ca,
                                              double* lambda_cb);

/* ---- hierarchy level-size search ------------------------------------- */

typedef enum ga_objective {
  GA_OBJECTIVE_EXACT = 0,
  GA_OBJECTIVE_APPROX = 1,
  GA_OBJECTIVE_SIMULATE = 2
} ga_objective;

typedef struct ga_search ga_search;

GOSSIPAGE_API ga_search* ga_hierarchy_search(long long n, long long h,
                                             const ga_rates* rates,
                                             ga_objective objective,
                                             const ga_sim_config* sim_config);
GOSSIPAGE_API long long ga_search_size(const ga_search* search);
/* k_levels must hold h entries. */
GOSSIPAGE_API ga_status ga_search_row_get(const ga_search* search, long long index,
                                          long long* k_levels, double* age);
GOSSIPAGE_API long long ga_search_best_size(const ga_search* search);
GOSSIPAGE_API ga_status ga_search_best_get(const ga_search* search, long long index,
                                           long long* k_levels);
GOSSIPAGE_API void ga_search_free(ga_search* search);

/* ---- scaling-law curves ---------------------------------------------- */

typedef struct ga_curve ga_curve;

/* Laws: disconnected, ring-clustered, disconnected-ring-heads,
 * ring-ring-heads, hierarchical-h2, hierarchical-h3, fully-connected.
 * rates may be NULL (all rates default to 1, splits to 1/2). */
GOSSIPAGE_API ga_curve* ga_scaling_curve(const char* law, const double* n_targets,
                                         long long count, const ga_rates* rates);
GOSSIPAGE_API long long ga_curve_size(const ga_curve* curve);
GOSSIPAGE_API ga_status ga_curve_point(const ga_curve* curve, long long index,
                                       double* n, double* age);
GOSSIPAGE_API ga_status ga_fit_exponent(const ga_curve* curve, double* slope,
                                        double* residual_norm);
GOSSIPAGE_API void ga_curve_free(ga_curve* curve);

/* ---- solver primitives ----------------------------------------------- */

GOSSIPAGE_API ga_status ga_ring_coefficient(long long n, double* out);
GOSSIPAGE_API ga_status ga_fc_bounds(long long k, long long m, double lambda_e,
                                     double lambda_s, double lambda,
                                     double* lower, double* upper);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GOSSIPAGE_H */
