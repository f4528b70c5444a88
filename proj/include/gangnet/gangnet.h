/* C interface to the gangnet library.
 *
 * All objects are opaque handles created by a *_new / producer call and
 * released with the matching *_free. Every fallible call returns a
 * gn_status; on failure gn_last_error() describes the problem (the text is
 * per thread and valid until the next failing call on that thread). Strings
 * handed out through char** parameters are owned by the caller and released
 * with gn_string_free.
 *
 * Parameters travel as string key/value options. A call that receives a key
 * it does not understand fails with GN_ERR_CONFIG, so typos are never
 * silently ignored. Reports echo every option they were given.
 */
#ifndef GANGNET_GANGNET_H
#define GANGNET_GANGNET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(GANGNET_BUILDING_LIBRARY)
#define GN_API __declspec(dllexport)
#else
#define GN_API __declspec(dllimport)
#endif
#else
#define GN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gn_status {
  GN_OK = 0,
  GN_ERR_ARGUMENT = 1,   /* null handle, index out of range */
  GN_ERR_CONFIG = 2,     /* unknown option key, malformed or out-of-range value */
  GN_ERR_PARSE = 3,      /* malformed input file; message carries the row */
  GN_ERR_VALIDATION = 4, /* well-formed data that breaks an invariant */
  GN_ERR_IO = 5,
  GN_ERR_LOOKUP = 6,     /* unknown offender or node id */
  GN_ERR_RUNTIME = 7
} gn_status;

typedef struct gn_options gn_options;
typedef struct gn_dataset gn_dataset;
typedef struct gn_network gn_network;
typedef struct gn_features gn_features;
typedef struct gn_watchlist gn_watchlist;
typedef struct gn_report gn_report;

GN_API const char* gn_version(void);
GN_API const char* gn_last_error(void);
GN_API const char* gn_status_name(gn_status status);
GN_API void gn_string_free(char* s);

/* ---- options ---- */

GN_API gn_options* gn_options_new(void);
GN_API void gn_options_free(gn_options* o);
/* Later values for the same key replace earlier ones. */
GN_API gn_status gn_options_set(gn_options* o, const char* key, const char* value);
GN_API size_t gn_options_size(const gn_options* o);

/* ---- datasets ----
 * load options:     range (FROM..TO), violent_codes (comma list added to the violent set)
 * generate options: offenders, months, gangs, target_mean_degree,
 *                   violent_record_fraction, contagion_strength,
 *                   seasonality_amplitude, seed, start, districts,
 *                   beats_per_district, gang_fraction,
 *                   violent_seed_fraction, victim_fraction
 */

GN_API gn_status gn_dataset_load(const char* path, const gn_options* o, gn_dataset** out);
GN_API gn_status gn_dataset_load_text(const char* csv, const gn_options* o, gn_dataset** out);
GN_API gn_status gn_dataset_generate(const gn_options* o, gn_dataset** out);
GN_API void gn_dataset_free(gn_dataset* d);
GN_API size_t gn_dataset_record_count(const gn_dataset* d);
GN_API size_t gn_dataset_offender_count(const gn_dataset* d);
GN_API size_t gn_dataset_event_count(const gn_dataset* d);
GN_API gn_status gn_dataset_write(const gn_dataset* d, const char* path);
/* Network statistics as JSON under "stats"; `echo` (may be null) is copied
 * under "config". */
GN_API gn_status gn_dataset_stats_json(const gn_dataset* d, const gn_options* echo, char** out);

/* ---- networks ----
 * options: window (FROM..TO, either bound may be empty)
 */

GN_API gn_status gn_network_build(const gn_dataset* d, const gn_options* o, gn_network** out);
GN_API void gn_network_free(gn_network* g);
GN_API size_t gn_network_node_count(const gn_network* g);
GN_API size_t gn_network_edge_count(const gn_network* g);
/* Borrowed pointer, valid while the network lives. */
GN_API const char* gn_network_node_id(const gn_network* g, size_t node);
GN_API gn_status gn_network_write_edges(const gn_network* g, const char* path);

/* ---- features ----
 * options: mask_own_labels (bool), per_crime (bool), columns (comma list),
 *          seed, threads
 */

GN_API gn_status gn_features_compute(const gn_dataset* d, const gn_network* g, const gn_options* o,
                                     gn_features** out);
GN_API void gn_features_free(gn_features* f);
GN_API size_t gn_features_rows(const gn_features* f);
GN_API size_t gn_features_cols(const gn_features* f);
GN_API const char* gn_features_column(const gn_features* f, size_t col);
GN_API const char* gn_features_row_id(const gn_features* f, size_t row);
GN_API gn_status gn_features_value(const gn_features* f, size_t row, size_t col, double* out);
GN_API gn_status gn_features_label(const gn_features* f, size_t row, int* out);
GN_API gn_status gn_features_write(const gn_features* f, const char* path);

/* ---- baselines ----
 * pva options: as_of (YYYY-MM-DD, default last date in the data), delta_days
 * thh options: masked (bool)
 */

GN_API gn_status gn_baseline_pva(const gn_dataset* d, const gn_options* o, gn_watchlist** out);
GN_API gn_status gn_baseline_thh(const gn_dataset* d, const gn_network* g, const gn_options* o,
                                 gn_watchlist** out);
GN_API void gn_watchlist_free(gn_watchlist* w);
GN_API size_t gn_watchlist_size(const gn_watchlist* w);
GN_API const char* gn_watchlist_member(const gn_watchlist* w, size_t i);
GN_API int gn_watchlist_contains(const gn_watchlist* w, const char* id);
GN_API gn_status gn_watchlist_write(const gn_watchlist* w, const char* path);

/* ---- evaluation ----
 * shared:   classifier (rf|dt), trees, features_per_split, bootstrap,
 *           max_depth, min_leaf, smote (bool), smote_k, smote_amount,
 *           compare (comma list), seed, threads
 * kfold:    k; compare from {thh, allpos}
 * temporal: start_month, inner_folds, frf_days, pool (all|recent);
 *           compare from {pva, thh}
 */

typedef struct gn_metrics {
  double precision; /* NaN when undefined */
  double recall;    /* NaN when undefined */
  double f1;
  double auc;       /* NaN when undefined */
  uint64_t tp, fp, fn, tn;
} gn_metrics;

GN_API gn_status gn_eval_kfold(const gn_dataset* d, const gn_options* o, gn_report** out);
GN_API gn_status gn_eval_temporal(const gn_dataset* d, const gn_options* o, gn_report** out);
GN_API void gn_report_free(gn_report* r);
/* Adds a key to the echoed parameters without interpreting it. */
GN_API gn_status gn_report_annotate(gn_report* r, const char* key, const char* value);
GN_API size_t gn_report_slice_count(const gn_report* r);
GN_API gn_status gn_report_slice(const gn_report* r, size_t i, const char** id, const char** method,
                                 gn_metrics* out);
GN_API gn_status gn_report_aggregate(const gn_report* r, const char* method, gn_metrics* out);
GN_API gn_status gn_report_json(const gn_report* r, char** out);
GN_API gn_status gn_report_write_json(const gn_report* r, const char* path);
/* slice,method,precision,recall,f1,auc,tp,fp,fn */
GN_API gn_status gn_report_write_prf(const gn_report* r, const char* path);
/* method,fpr,tpr */
GN_API gn_status gn_report_write_roc(const gn_report* r, const char* path);

/* Combines report.json files into one document listing every slice and
 * aggregate row tagged with its source path. */
GN_API gn_status gn_report_merge(const char* const* paths, size_t count, char** out);

#ifdef __cplusplus
}
#endif

#endif
