/* C interface to the first-passage-percolation laboratory.
 *
 * All functions return fpp_status; outputs are written through pointers.
 * On failure, fpp_last_error() describes the problem (thread-local). Handles
 * are opaque and must be released with their matching destroy function.
 */
#ifndef FPPLAB_H
#define FPPLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpp_status {
  FPP_OK = 0,
  FPP_ERR_INVALID = 1,  /* bad argument or precondition */
  FPP_ERR_CONFIG = 2,   /* malformed configuration (CLI exit 2) */
  FPP_ERR_RESOURCE = 3, /* memory/volume cap exceeded (CLI exit 3) */
  FPP_ERR_INTERNAL = 4,
} fpp_status;

const char* fpp_version(void);
/* Message for the most recent failure on this thread; never NULL. */
const char* fpp_last_error(void);
/* Frees strings returned through char** outputs. */
void fpp_string_free(char* s);

/* ---- random environments ------------------------------------------------ */

typedef struct fpp_weights fpp_weights;

/* dist_json: {"family":"exponential","params":{"rate":1.0}} etc. */
fpp_status fpp_weights_create(const char* dist_json, uint64_t seed, fpp_weights** out);
void fpp_weights_destroy(fpp_weights* w);

/* Weight of the edge from `base` (length d) to base + e_axis. */
fpp_status fpp_edge_weight(const fpp_weights* w, const int64_t* base, int32_t d, int32_t axis,
                           double* out);

/* ---- passage times -------------------------------------------------------- */

/* Restricted passage time within [box_lo, box_hi] (both length d); pass NULL
 * for both to query the full lattice through an automatic envelope of margin
 * K. envelope_limited (may be NULL) is set to 1 when the witnessing geodesic
 * touched that envelope. Disconnected terminals yield +inf. */
fpp_status fpp_passage_time(const fpp_weights* w, const int64_t* v, const int64_t* u, int32_t d,
                            const int64_t* box_lo, const int64_t* box_hi, double K,
                            double* time_out, int32_t* envelope_limited);

/* Max/min edge weight over the geodesic set of (v, u) on the full lattice. */
fpp_status fpp_geodesic_stats(const fpp_weights* w, const int64_t* v, const int64_t* u, int32_t d,
                              double K, double* max_out, double* min_out, uint64_t* edge_count);

/* ---- hierarchical family verification --------------------------------------- */

/* JSON report {d, m, n, conditions:{xi1..xi4}, counts, ...}; free with
 * fpp_string_free. */
fpp_status fpp_xi_verify_json(int32_t d, int64_t m, char** json_out);

/* ---- experiments ------------------------------------------------------------ */

typedef struct fpp_report fpp_report;

/* Runs one experiment described by config_json (see README for the schema).
 * Deterministic given the config, including across worker counts. */
fpp_status fpp_run_experiment(const char* config_json, fpp_report** out);
/* Borrowed pointers, valid until the report is destroyed. */
const char* fpp_report_csv(const fpp_report* r);
const char* fpp_report_json(const fpp_report* r);
const char* fpp_report_kind(const fpp_report* r);
void fpp_report_destroy(fpp_report* r);

#ifdef __cplusplus
}
#endif

#endif /* FPPLAB_H */
