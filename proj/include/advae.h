/* adVAE anomaly detection - C API.
 *
 * All functions return 0 on success or a nonzero advae_status; handle-
 * returning functions return NULL on failure. advae_last_error() describes
 * the most recent failure on the calling thread.
 */
#ifndef ADVAE_H
#define ADVAE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ADVAE_API __declspec(dllexport)
#else
#define ADVAE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum advae_status {
    ADVAE_OK = 0,
    ADVAE_ERR_INVALID_DIMENSION = 1,
    ADVAE_ERR_STATE = 2,
    ADVAE_ERR_DATA = 3,
    ADVAE_ERR_DIVERGED = 4,
    ADVAE_ERR_USAGE = 5,
    ADVAE_ERR_INTERNAL = 6
} advae_status;

typedef struct advae_dataset advae_dataset;
typedef struct advae_model advae_model;

ADVAE_API const char* advae_last_error(void);

/* --- datasets --- */

ADVAE_API advae_dataset* advae_dataset_load_csv(const char* path, const char* label_column,
                                                const char* name);
ADVAE_API advae_dataset* advae_dataset_from_manifest(const char* manifest_path, const char* name);
/* Deterministic benchmark-shaped synthetic dataset (letter, cardio,
 * satellite, optical, pen). */
ADVAE_API advae_dataset* advae_dataset_synth(const char* name, uint64_t seed);
ADVAE_API void advae_dataset_free(advae_dataset* dataset);

ADVAE_API size_t advae_dataset_rows(const advae_dataset* dataset);
ADVAE_API size_t advae_dataset_dims(const advae_dataset* dataset);
ADVAE_API size_t advae_dataset_anomalies(const advae_dataset* dataset);
ADVAE_API advae_status advae_dataset_write_csv(const advae_dataset* dataset, const char* path);

/* Train/test row counts and moved-anomaly count for a split spec. */
ADVAE_API advae_status advae_split_counts(const advae_dataset* dataset, double train_fraction,
                                          uint64_t seed, double contamination, size_t* train_rows,
                                          size_t* test_rows, size_t* moved);

/* --- training --- */

/* config keys/values are applied over the built-in per-dataset defaults, in
 * order (so later pairs win). trace_csv_path may be NULL. */
ADVAE_API advae_model* advae_train(const advae_dataset* dataset, const char* const* config_keys,
                                   const char* const* config_values, size_t config_count,
                                   const char* trace_csv_path);

ADVAE_API advae_status advae_model_save(const advae_model* model, const char* path);
ADVAE_API advae_model* advae_model_load(const char* path);
ADVAE_API void advae_model_free(advae_model* model);

ADVAE_API const char* advae_model_variant(const advae_model* model);
ADVAE_API const char* advae_model_dataset(const advae_model* model);
ADVAE_API uint64_t advae_model_score_seed(const advae_model* model);
ADVAE_API size_t advae_model_latent_dim(const advae_model* model);

/* --- scoring and reports --- */

/* Scores one side (0 train, 1 test) of the model's stored split of the given
 * dataset. scores/labels must hold advae_split_counts() entries; out_count
 * receives the row count, out_of_range the rows outside the scaled range. */
ADVAE_API advae_status advae_score(const advae_model* model, const advae_dataset* dataset,
                                   int test_side, uint64_t score_seed, double* scores, int* labels,
                                   size_t capacity, size_t* out_count, size_t* out_of_range);

/* Encoder mean coordinates for one split side; latents must hold
 * rows * latent_dim doubles. */
ADVAE_API advae_status advae_latents(const advae_model* model, const advae_dataset* dataset,
                                     int test_side, double* latents, size_t capacity,
                                     size_t* out_rows, size_t* out_cols);

ADVAE_API advae_status advae_kde_threshold(const double* scores, size_t count, double alpha,
                                           double* out_threshold, double* out_bandwidth,
                                           double* out_fraction_flagged);

typedef struct advae_metrics {
    double ap;
    double auc;
    double recall;
    double precision;
    double f1;
    uint64_t tp, fp, tn, fn;
    double threshold;
    /* 0 when the labels are single-class and AP/AUC are not defined. */
    int has_ranking_metrics;
} advae_metrics;

ADVAE_API advae_status advae_compute_metrics(const double* scores, const int* labels, size_t count,
                                             double threshold, advae_metrics* out);

ADVAE_API advae_status advae_wasserstein_1d(const double* a, const double* b, size_t count,
                                            double* out_distance);

/* Generator-sensitivity probe over the five latent perturbations on normal
 * test rows; out_distances must hold five doubles. */
ADVAE_API advae_status advae_probe(const advae_model* model, const advae_dataset* dataset,
                                   size_t sample_rows, uint64_t score_seed, double* out_distances);
ADVAE_API const char* advae_probe_noise_name(size_t index);

/* --- report files --- */

ADVAE_API advae_status advae_write_scores_csv(const char* path, const double* scores,
                                              const int* labels, size_t count);
ADVAE_API advae_status advae_write_threshold_report(const char* path, double alpha, double bandwidth,
                                                    size_t sample_count, double threshold,
                                                    double fraction_flagged);

#ifdef __cplusplus
}
#endif

#endif /* ADVAE_H */
