/* C interface to trigsum: difference-operator acceleration of trigonometric series. */

#pragma once

/* Generated by the trigsum-ffi build script; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Trigonometric factor of the series.
 */
typedef enum TrigsumKind {
  TRIGSUM_KIND_COSINE = 0,
  TRIGSUM_KIND_SINE = 1,
} TrigsumKind;

/**
 * Outcome of a trigsum call.
 */
typedef enum TrigsumStatus {
  TRIGSUM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TRIGSUM_STATUS_NULL_ARGUMENT = 1,
  TRIGSUM_STATUS_INVALID_INPUT = 2,
  TRIGSUM_STATUS_INDEX_OUT_OF_RANGE = 3,
  /**
   * A transform denominator was too close to zero.
   */
  TRIGSUM_STATUS_DENOMINATOR_NEAR_ZERO = 4,
  /**
   * A ratio probe failed to settle.
   */
  TRIGSUM_STATUS_RATIO_DIVERGENT = 5,
  TRIGSUM_STATUS_ZERO_DENOMINATOR = 6,
  /**
   * A term budget ran out before the stopping rule fired.
   */
  TRIGSUM_STATUS_BUDGET_EXCEEDED = 7,
  /**
   * The library panicked; treat the out values as unwritten.
   */
  TRIGSUM_STATUS_PANIC = 8,
} TrigsumStatus;

/**
 * Why factor estimation stopped.
 */
typedef enum TrigsumStopReason {
  /**
   * All requested factors were estimated.
   */
  TRIGSUM_STOP_REASON_COMPLETED = 0,
  /**
   * The differenced coefficients vanished; no further factor is needed.
   */
  TRIGSUM_STOP_REASON_ANNIHILATED = 1,
  /**
   * A ratio probe failed to settle; the chain ends early.
   */
  TRIGSUM_STOP_REASON_RATIO_DIVERGENT = 2,
} TrigsumStopReason;

/**
 * An opaque series handle; create with one of the `trigsum_series_*`
 * constructors and release with `trigsum_series_free`.
 */
typedef struct TrigsumSeries TrigsumSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a series with coefficients `1/(aⁿ + bⁿ)`; null if the input is
 * invalid (requires `0 < a < b` and a finite nonzero phase).
 */
struct TrigsumSeries *trigsum_series_two_exp(double a,
                                             double b,
                                             double alpha,
                                             double beta,
                                             double x,
                                             enum TrigsumKind kind);

/**
 * Creates a series with coefficients `ρⁿ`; null if the input is invalid.
 */
struct TrigsumSeries *trigsum_series_geometric(double rho,
                                               double alpha,
                                               double beta,
                                               double x,
                                               enum TrigsumKind kind);

/**
 * Creates a series with coefficients `n⁻ˢ`; null if the input is invalid.
 */
struct TrigsumSeries *trigsum_series_power(double s,
                                           double alpha,
                                           double beta,
                                           double x,
                                           enum TrigsumKind kind);

/**
 * Creates a series from `len` explicit coefficients: `re[k]` (+ `im[k]`i
 * when `im` is non-null) is the coefficient of index `k + 1`. Null if `re`
 * is null, `len` is zero, or the phase is invalid.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `len` readable doubles.
 */
struct TrigsumSeries *trigsum_series_from_values(const double *re,
                                                 const double *im,
                                                 size_t len,
                                                 double alpha,
                                                 double beta,
                                                 double x,
                                                 enum TrigsumKind kind);

/**
 * Releases a series handle. Null is a no-op.
 *
 * # Safety
 * `series` must be null or a pointer returned by a constructor, not yet
 * freed.
 */
void trigsum_series_free(struct TrigsumSeries *series);

/**
 * Sums the series directly with the conservative stopping rule, writing
 * the sum and the number of terms used.
 *
 * # Safety
 * `series` must be a live handle; the out pointers must be writable.
 */
enum TrigsumStatus trigsum_sum(const struct TrigsumSeries *series,
                               double tail_bound,
                               double *out_sum_re,
                               double *out_sum_im,
                               uint64_t *out_terms);

/**
 * Estimates up to `max_p` scale factors into `out_re`/`out_im` (each with
 * capacity `max_p`), writing how many were found and why estimation
 * stopped. A stop before `max_p` factors is still `Ok`; the shorter chain
 * is usable.
 *
 * # Safety
 * `series` must be a live handle; `out_re` and `out_im` must have room for
 * `max_p` doubles; the remaining out pointers must be writable.
 */
enum TrigsumStatus trigsum_estimate_r(const struct TrigsumSeries *series,
                                      size_t max_p,
                                      double *out_re,
                                      double *out_im,
                                      size_t *out_len,
                                      enum TrigsumStopReason *out_reason);

/**
 * Applies the transform with the given scale factors (`r_im` null = all
 * real) and writes the partial sum with `remainder_terms` remainder terms.
 *
 * # Safety
 * `series` must be a live handle; `r_re` (and `r_im` when non-null) must
 * point to `r_len` readable doubles; the out pointers must be writable.
 */
enum TrigsumStatus trigsum_transformed_partial_sum(const struct TrigsumSeries *series,
                                                   const double *r_re,
                                                   const double *r_im,
                                                   size_t r_len,
                                                   uint64_t remainder_terms,
                                                   double *out_re,
                                                   double *out_im);

/**
 * Builds the full acceleration report and returns it as the same JSON the
 * CLI prints. The string is heap-allocated; release it with
 * `trigsum_string_free`.
 *
 * # Safety
 * `series` must be a live handle; `out_json` must be writable.
 */
enum TrigsumStatus trigsum_accelerate_json(const struct TrigsumSeries *series,
                                           double tol,
                                           size_t max_p,
                                           char **out_json);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void trigsum_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
