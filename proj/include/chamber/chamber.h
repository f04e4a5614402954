/* chamber: simulation and classification of reflected-repelled Brownian
 * motion in convex polyhedral domains.
 *
 * C API over the C++ core: opaque handles, integer status codes, UTF-8 JSON
 * strings in and out.  Every char* returned through an out-parameter is
 * heap-allocated and must be released with chamber_string_free().  Handles
 * are released with their matching *_free() function.  On any status other
 * than CHAMBER_OK, chamber_last_error() returns a thread-local message.
 */
#ifndef CHAMBER_H
#define CHAMBER_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define CHAMBER_API_VERSION "1.0.0"

typedef enum chamber_status {
    CHAMBER_OK = 0,
    CHAMBER_ERROR_PARSE = 1,         /* malformed config / schema violation */
    CHAMBER_ERROR_INDETERMINATE = 2, /* near-critical classification */
    CHAMBER_ERROR_VALIDATION = 3,    /* root-system axiom failure */
    CHAMBER_ERROR_RUNTIME = 4,       /* solver or simulation failure */
    CHAMBER_ERROR_INVALID_ARGUMENT = 5
} chamber_status;

typedef struct chamber_model_s chamber_model;
typedef struct chamber_trajectory_s chamber_trajectory;

const char* chamber_version(void);

/* Thread-local message for the most recent failing call. */
const char* chamber_last_error(void);

void chamber_string_free(char* s);

/* Model construction from a model-spec JSON document (kinds: rost_vares,
 * wishart, dunkl, trig, hyperbolic, custom). */
chamber_status chamber_model_from_json(const char* json, chamber_model** out);
void chamber_model_free(chamber_model* model);

int chamber_model_dimension(const chamber_model* model);
int chamber_model_num_faces(const chamber_model* model);

/* Resolved model spec; reparsing it builds an identical model. */
chamber_status chamber_model_to_json(const chamber_model* model, char** out);

/* Per-face boundary classification table (weak / middle / strong), with the
 * exponent diagnostics and the reachability prediction.  Near-critical faces
 * appear as "indeterminate" rows; the report carries indeterminate_count. */
chamber_status chamber_classify_json(const chamber_model* model, char** out);

/* Root-system validation.  Input: {"family","rank","k"} or explicit roots.
 * Always returns a report on CHAMBER_OK; "valid" is false when axioms fail.
 */
chamber_status chamber_validate_roots_json(const char* spec_json, char** out);

/* Single trajectory under a sim-config JSON document ({"dt","horizon","seed",
 * "scheme","hit_eps","edge_eps","escape_radius","record_stride"}). */
chamber_status chamber_simulate_json(const chamber_model* model,
                                     const char* sim_json,
                                     chamber_trajectory** out);
void chamber_trajectory_free(chamber_trajectory* trajectory);

chamber_status chamber_trajectory_to_csv(const chamber_trajectory* trajectory,
                                         int include_gaps, char** out);
chamber_status chamber_trajectory_summary_json(
    const chamber_trajectory* trajectory, char** out);

/* Ensemble of n trajectories; returns the full statistics report including
 * per-face verdict lines against the classifier predictions.  threads <= 0
 * resolves to CHAMBER_THREADS or hardware concurrency. */
chamber_status chamber_ensemble_json(const chamber_model* model,
                                     const char* sim_json, int64_t n,
                                     int threads, char** out);

#ifdef __cplusplus
}
#endif

#endif /* CHAMBER_H */
