/* wordmap: cross-situational word-learning simulator.
 *
 * C interface to the wordmap core. All functions returning wm_status report
 * failures through the return code; wm_last_error() gives a human-readable
 * message for the most recent failing call on the calling thread. Handles are
 * opaque and must be released with the matching *_destroy/_close function.
 */
#ifndef WORDMAP_H
#define WORDMAP_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wm_status {
    WM_OK = 0,
    WM_ERR_USAGE = 1,   /* invalid arguments or misuse of the API */
    WM_ERR_DATA = 2,    /* missing or malformed input data */
    WM_ERR_RUNTIME = 3  /* internal or I/O failure */
} wm_status;

const char* wm_version(void);
/* Message for the last failing call on this thread ("" if none). */
const char* wm_last_error(void);

/* ---- parameters ------------------------------------------------------- */

typedef struct wm_params wm_params;

wm_params* wm_params_create(void); /* tuned defaults */
wm_status wm_params_load(wm_params* params, const char* path);
wm_status wm_params_set(wm_params* params, const char* key, const char* value);
uint64_t wm_params_hash(const wm_params* params);
void wm_params_destroy(wm_params* params);

/* ---- dataset ----------------------------------------------------------- */

typedef struct wm_dataset wm_dataset;

/* Opens a dataset directory (descriptors.txt required; lexicon.tsv and
 * design files under designs/ optional). */
wm_status wm_dataset_open(const char* dir, wm_dataset** out);
int wm_dataset_object_count(const wm_dataset* dataset);
void wm_dataset_close(wm_dataset* dataset);

/* ---- experiments ------------------------------------------------------- */

typedef struct wm_run wm_run;

/* Runs an experiment (exp1_2x2, exp1_3x3, exp1_4x4, exp2..exp6).
 * participants <= 0 uses the design default. */
wm_status wm_run_experiment(const wm_dataset* dataset, const wm_params* params,
                            const char* experiment_id, int participants,
                            uint64_t seed, wm_run** out);

int wm_run_participant_count(const wm_run* run);
int wm_run_metric_count(const wm_run* run);
const char* wm_run_metric_name(const wm_run* run, int index);
/* Aggregate over participants (missing values skipped). Any out pointer may
 * be NULL. */
wm_status wm_run_metric(const wm_run* run, const char* name, double* mean,
                        double* sd, double* se);
wm_status wm_run_participant_metric(const wm_run* run, int participant,
                                    const char* name, double* value);
/* format: "csv", "json" or "text". */
wm_status wm_run_write_report(const wm_run* run, const char* out_dir,
                              const char* format);
void wm_run_destroy(wm_run* run);

/* ---- tools ------------------------------------------------------------- */

/* Writes a synthetic descriptor file. names_path (one object name per line,
 * '#' comments) overrides the object count; pass NULL to generate `objects`
 * anonymous objects. per_object/archetypes/noise <= 0 pick the defaults. */
wm_status wm_generate_descriptors(const char* out_path, int objects,
                                  const char* names_path, int per_object,
                                  int archetypes, double noise, uint64_t seed);

/* Generates a schedule for the experiment with the given seed and checks
 * every design constraint with an independent counting pass. dataset_dir may
 * be NULL (builtin design). */
wm_status wm_validate_schedule(const char* experiment_id, uint64_t seed,
                               const char* dataset_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* WORDMAP_H */
