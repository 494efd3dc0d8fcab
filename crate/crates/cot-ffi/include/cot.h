/* C interface to the circular optimal transport library. */

#ifndef COT_H
#define COT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum CotStatus {
  COT_STATUS_OK = 0,
  COT_STATUS_NULL_POINTER = 1,
  COT_STATUS_INVALID_ARGUMENT = 2,
  COT_STATUS_PARSE_ERROR = 3,
  COT_STATUS_COMPUTE_ERROR = 4,
} CotStatus;

/**
 * A parsed analytic distribution. Opaque.
 */
typedef struct CotDistribution CotDistribution;

/**
 * A sample of points on the circle, in turns. Opaque.
 */
typedef struct CotSample CotSample;

/**
 * Test outcome with plain-old-data fields.
 */
typedef struct CotTestResult {
  double statistic;
  double critical_value;
  double p_value;
  /**
   * 1 when the null is rejected at `alpha`, 0 otherwise.
   */
  int32_t reject;
  size_t n;
  double alpha;
} CotTestResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread.
 *
 * # Safety
 * The pointer is valid until the next failing call on the same thread; do
 * not free it.
 */
const char *cot_last_error_message(void);

/**
 * Builds a sample from `len` angles in turns. Values are wrapped into
 * `[0, 1)`. On success writes a handle to `*out`.
 *
 * # Safety
 * `values` must point to `len` readable doubles and `out` to a writable
 * pointer slot. The handle must be released with [`cot_sample_free`].
 */
enum CotStatus cot_sample_new(const double *values, size_t len, struct CotSample **out);

/**
 * Number of observations in the sample.
 *
 * # Safety
 * `sample` must be a live handle from [`cot_sample_new`].
 */
size_t cot_sample_len(const struct CotSample *sample);

/**
 * Releases a sample handle. NULL is a no-op.
 *
 * # Safety
 * `sample` must be NULL or a handle not freed before.
 */
void cot_sample_free(struct CotSample *sample);

/**
 * Parses a distribution description such as `"uniform"`,
 * `"vonmises:0.5,2"`, `"stephens:2,3"`, `"wrappedcauchy:0.5,0.3"`, or
 * `"cardioid:0.5,0.3"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a writable pointer
 * slot. The handle must be released with [`cot_distribution_free`].
 */
enum CotStatus cot_distribution_parse(const char *spec, struct CotDistribution **out);

/**
 * Releases a distribution handle. NULL is a no-op.
 *
 * # Safety
 * `dist` must be NULL or a handle not freed before.
 */
void cot_distribution_free(struct CotDistribution *dist);

/**
 * Exact transport distance between two samples.
 *
 * # Safety
 * `x`, `y` must be live sample handles and `out` writable.
 */
enum CotStatus cot_distance_exact(const struct CotSample *x,
                                  const struct CotSample *y,
                                  double *out);

/**
 * Grid transport distance between a sample and an analytic law at the
 * given resolution.
 *
 * # Safety
 * `x`, `dist` must be live handles and `out` writable.
 */
enum CotStatus cot_distance_grid(const struct CotSample *x,
                                 const struct CotDistribution *dist,
                                 size_t resolution,
                                 double *out);

/**
 * One-sample goodness-of-fit test of `sample` against `null`, calibrated
 * by `replicates` Monte Carlo draws of the limit law at `resolution`.
 *
 * # Safety
 * `sample`, `null` must be live handles and `out` writable.
 */
enum CotStatus cot_test_goodness_of_fit(const struct CotSample *sample,
                                        const struct CotDistribution *null,
                                        double alpha,
                                        size_t resolution,
                                        size_t replicates,
                                        uint64_t seed,
                                        struct CotTestResult *out);

/**
 * Two-sample test of equal law via the pooled reduced-size bootstrap with
 * `replicates` resampling rounds.
 *
 * # Safety
 * `x`, `y` must be live handles and `out` writable.
 */
enum CotStatus cot_test_two_sample(const struct CotSample *x,
                                   const struct CotSample *y,
                                   double alpha,
                                   size_t replicates,
                                   uint64_t seed,
                                   struct CotTestResult *out);

/**
 * Human-readable label of a parsed distribution, e.g. `"vonmises:0.5,2"`,
 * written into `buf` (at most `cap - 1` bytes plus a NUL, truncated if
 * needed). Returns the full length of the label in bytes.
 *
 * # Safety
 * `dist` must be a live handle; `buf` must have `cap` writable bytes or be
 * NULL (to query the length only).
 */
size_t cot_distribution_label(const struct CotDistribution *dist, char *buf, size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COT_H */
