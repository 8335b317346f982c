/*
 * aoi — average Age of Information for one- and two-hop status-update links.
 *
 * C interface to the shared library. All functions return aoi_status; any
 * output parameters are written only on AOI_OK. Objects returned through
 * double pointers are owned by the caller and released with the matching
 * *_free function. A human-readable message for the most recent failure on
 * the calling thread is available from aoi_last_error().
 */
#ifndef AOI_AOI_H
#define AOI_AOI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aoi_status {
    AOI_OK = 0,
    AOI_ERR_INVALID_ARGUMENT = 1,
    AOI_ERR_UNREACHABLE_TARGET = 2, /* success state unreachable; moments diverge */
    AOI_ERR_NO_CYCLES = 3,          /* horizon ended before a usable renewal cycle */
    AOI_ERR_IO = 4,
    AOI_ERR_INTERNAL = 5
} aoi_status;

typedef enum aoi_scheme {
    AOI_SINGLE_NOARQ = 0, /* one hop, fresh packet every slot */
    AOI_SINGLE_ARQ = 1,   /* one hop, retransmit until delivered */
    AOI_TWO_NOARQ = 2,    /* two hops, any failure restarts with a fresh packet */
    AOI_TWO_ARQ = 3       /* two hops, relay retransmits on second-hop failure */
} aoi_scheme;

typedef enum aoi_axis {
    AOI_AXIS_VARY_P1 = 0,
    AOI_AXIS_VARY_P2 = 1,
    AOI_AXIS_DIAGONAL = 2
} aoi_axis;

const char* aoi_version(void);
const char* aoi_rng_name(void);
const char* aoi_status_message(aoi_status status);
/* Message for the calling thread's most recent failure ("" if none). */
const char* aoi_last_error(void);

/* Canonical token ("two-arq", ...) and its inverse. */
const char* aoi_scheme_token(aoi_scheme scheme);
aoi_status aoi_scheme_parse(const char* token, aoi_scheme* out_scheme);

/* ------------------------------------------------------------------ */
/* Closed forms                                                       */
/* ------------------------------------------------------------------ */

typedef struct aoi_moments {
    double e_z;     /* expected inter-update time, slots */
    double e_z2;    /* its second moment, slots^2 */
    double e_tau_z; /* expected delivery-age * inter-update product, slots^2 */
} aoi_moments;

/* Average AoI of the scheme's closed form. p1 acts as q for single-hop
 * schemes (p2 is then ignored). out_moments may be NULL. */
aoi_status aoi_analytic(aoi_scheme scheme, double p1, double p2, double* out_aoi,
                        aoi_moments* out_moments);

/* two-arq minus two-noarq; always <= 0 and exactly 0 at p2 = 1. */
aoi_status aoi_gap(double p1, double p2, double* out_gap);

/* E[tau Z]/E[Z] + E[Z^2]/(2 E[Z]). */
aoi_status aoi_average_from_moments(const aoi_moments* moments, double* out_aoi);

/* ------------------------------------------------------------------ */
/* Absorbing protocol chains                                          */
/* ------------------------------------------------------------------ */

typedef struct aoi_chain aoi_chain;

/* Protocol chain of the scheme: 3 states {1, 2, s} for two-hop schemes,
 * 2 states {1, s} for single-hop. */
aoi_status aoi_chain_build(aoi_scheme scheme, double p1, double p2, aoi_chain** out_chain);

/* Arbitrary chain from a row-major n x n transition matrix and the index of
 * the success state. The matrix is stored as given; invariant violations are
 * reported through aoi_chain_violation_count, not rejected here. */
aoi_status aoi_chain_create(const double* transition_row_major, size_t n, size_t target,
                            aoi_chain** out_chain);
void aoi_chain_free(aoi_chain* chain);

size_t aoi_chain_size(const aoi_chain* chain);
const char* aoi_chain_label(const aoi_chain* chain, size_t state);
aoi_status aoi_chain_entry(const aoi_chain* chain, size_t row, size_t col, double* out_p);

/* Diagnostics: number of invariant violations (0 means valid) and the i-th
 * violation message (owned by the chain). */
size_t aoi_chain_violation_count(const aoi_chain* chain);
const char* aoi_chain_violation(const aoi_chain* chain, size_t index);

/* First-passage mean and second moment to the success state from every
 * state, written to caller buffers of aoi_chain_size() doubles.
 * out_second_moment may be NULL. */
aoi_status aoi_chain_hitting_moments(const aoi_chain* chain, double* out_mean,
                                     double* out_second_moment);

/* ------------------------------------------------------------------ */
/* Slot-level simulation                                              */
/* ------------------------------------------------------------------ */

typedef struct aoi_sim_config {
    aoi_scheme scheme;
    double p1;              /* q for single-hop schemes */
    double p2;              /* ignored for single-hop schemes */
    uint64_t horizon;       /* slots, >= 1 */
    uint64_t seed;
    uint64_t warmup_cycles; /* cycles dropped beyond the structural seed cycle */
} aoi_sim_config;

typedef struct aoi_sim_stats {
    double average_aoi;
    uint64_t cycle_count; /* cycles retained in the average */
    double e_z;
    double e_z2;
    double e_tau_z;
    double std_error;     /* batch-means standard error of average_aoi */
} aoi_sim_stats;

typedef struct aoi_sim_run aoi_sim_run;

/* Runs the protocol; deterministic in the config. Fails with
 * AOI_ERR_NO_CYCLES when the horizon ends before the first delivery. */
aoi_status aoi_sim_run_new(const aoi_sim_config* config, aoi_sim_run** out_run);
void aoi_sim_run_free(aoi_sim_run* run);

/* Completed cycles (including the seed cycle excluded from averages). */
uint64_t aoi_sim_run_cycle_count(const aoi_sim_run* run);
aoi_status aoi_sim_run_cycle(const aoi_sim_run* run, uint64_t index, uint64_t* out_z,
                             uint64_t* out_tau);
aoi_status aoi_sim_run_stats(const aoi_sim_run* run, aoi_sim_stats* out_stats);

/* Instantaneous AoI at the end of each of the first max_slots slots, written
 * to a caller buffer of max_slots entries. */
aoi_status aoi_sim_trace(const aoi_sim_config* config, uint64_t max_slots, uint64_t* out_aoi);

/* Per-point simulation seed used by sweeps, exposed so single grid points
 * can be reproduced in isolation. */
uint64_t aoi_derive_seed(uint64_t base, uint64_t scheme_index, uint64_t i, uint64_t j,
                         uint64_t replication);

/* ------------------------------------------------------------------ */
/* Verification and sweeps                                            */
/* ------------------------------------------------------------------ */

typedef struct aoi_row {
    aoi_scheme scheme;
    double p1;
    double p2;
    double analytic_aoi;
    double solver_aoi;
    double sim_aoi;
    double sim_std_error;
    uint64_t cycles;
    int32_t disagree; /* 1 when |sim - analytic| > 3 * sim_std_error */
    int32_t error;    /* aoi_status of a failed grid point, 0 otherwise */
} aoi_row;

/* All three estimates (closed form, chain solver, simulation) at one point. */
aoi_status aoi_verify(aoi_scheme scheme, double p1, double p2, uint64_t horizon, uint64_t seed,
                      aoi_row* out_row);

typedef struct aoi_sweep_spec {
    const aoi_scheme* schemes;
    size_t n_schemes;
    const double* p1_values;
    size_t n_p1;
    const double* p2_values;
    size_t n_p2;
    uint64_t horizon;
    uint64_t seed;
    uint32_t replications;
} aoi_sweep_spec;

typedef struct aoi_sweep aoi_sweep;

/* One row per (scheme, p1, p2), in ascending order. Point failures are
 * recorded in-row and do not abort the sweep. */
aoi_status aoi_sweep_run(const aoi_sweep_spec* spec, aoi_sweep** out_sweep);
void aoi_sweep_free(aoi_sweep* sweep);

size_t aoi_sweep_size(const aoi_sweep* sweep);
aoi_status aoi_sweep_row(const aoi_sweep* sweep, size_t index, aoi_row* out_row);

/* CSV: header scheme,p1,p2,analytic_aoi,solver_aoi,sim_aoi,sim_std_error,
 * cycles; 6 significant digits; LF endings; deterministic order. */
aoi_status aoi_sweep_write_csv(const aoi_sweep* sweep, const char* path);

/* Self-contained SVG chart of the sweep along the given axis. */
aoi_status aoi_sweep_write_svg(const aoi_sweep* sweep, aoi_axis axis, const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AOI_AOI_H */
