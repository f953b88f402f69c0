#ifndef QUASISTRIP_H
#define QUASISTRIP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum {
  QS_STATUS_OK = 0,
  QS_STATUS_NULL_ARGUMENT = 1,
  QS_STATUS_INVALID_UTF8 = 2,
  QS_STATUS_CONFIG_ERROR = 3,
  QS_STATUS_DIMENSION_MISMATCH = 4,
  QS_STATUS_GENERATION_ERROR = 5,
  QS_STATUS_BUFFER_TOO_SMALL = 6,
} QsStatus;

/**
 * A generated point set together with its covering report.
 */
typedef struct QsPatch QsPatch;

/**
 * A parsed configuration with its cluster, embedding and strip data.
 */
typedef struct QsPipeline QsPipeline;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *qs_last_error_message(void);

/**
 * Builds a pipeline from config text (same grammar as the CLI's
 * `--config` files). On success writes a handle to `out`.
 */
QsStatus qs_pipeline_from_config(const char *text, QsPipeline **out);

void qs_pipeline_free(QsPipeline *pipeline);

/**
 * Superspace dimension k (number of antipodal representative pairs).
 * Returns 0 for a null handle.
 */
uint32_t qs_pipeline_superspace_dim(const QsPipeline *pipeline);

/**
 * Physical dimension n (2 or 3). Returns 0 for a null handle.
 */
uint32_t qs_pipeline_physical_dim(const QsPipeline *pipeline);

/**
 * Number of facet families, C(k, n+1). Returns 0 for a null handle.
 */
uint64_t qs_pipeline_tuple_count(const QsPipeline *pipeline);

/**
 * Common norm kappa of the embedding rows. Returns 0 for a null handle.
 */
double qs_pipeline_kappa(const QsPipeline *pipeline);

/**
 * Strip membership of an integer lattice point via the cofactor test.
 */
QsStatus qs_pipeline_strip_contains(const QsPipeline *pipeline,
                                    const int32_t *coords,
                                    size_t len,
                                    bool *out);

/**
 * Window membership of an integer lattice point via the independent
 * feasibility oracle.
 */
QsStatus qs_pipeline_window_contains(const QsPipeline *pipeline,
                                     const int32_t *coords,
                                     size_t len,
                                     bool *out);

/**
 * Runs generation with the pipeline's configured radius and writes a patch
 * handle to `out`.
 */
QsStatus qs_pipeline_generate(const QsPipeline *pipeline, QsPatch **out);

void qs_patch_free(QsPatch *patch);

/**
 * Number of points in the patch. Returns 0 for a null handle.
 */
size_t qs_patch_len(const QsPatch *patch);

/**
 * Arithmetical neighbours that failed the covering check (always 0 for a
 * correct build). Returns u64::MAX for a null handle.
 */
uint64_t qs_patch_covering_violations(const QsPatch *patch);

/**
 * Copies point coordinates into `buf`, n doubles per point, point-major.
 * `cap` is the buffer length in doubles and must be at least len * n.
 */
QsStatus qs_patch_positions(const QsPatch *patch, double *buf, size_t cap);

/**
 * Copies source lattice vectors into `buf`, k int32 per point,
 * point-major. `cap` is the buffer length in int32 and must be at least
 * len * k.
 */
QsStatus qs_patch_sources(const QsPatch *patch, int32_t *buf, size_t cap);

/**
 * Copies per-point occupation fractions into `buf` (one double per point).
 */
QsStatus qs_patch_occupations(const QsPatch *patch, double *buf, size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUASISTRIP_H */
