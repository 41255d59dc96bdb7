#ifndef LINBANDIT_H
#define LINBANDIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LbStatus {
  LB_STATUS_OK = 0,
  LB_STATUS_NULL_POINTER = 1,
  LB_STATUS_INVALID_ARGUMENT = 2,
  LB_STATUS_DIMENSION_MISMATCH = 3,
  LB_STATUS_NUMERIC = 4,
  /**
   * The divergence is infinite; the out-value holds `+inf`.
   */
  LB_STATUS_INFINITE = 5,
  LB_STATUS_PANIC = 6,
} LbStatus;

typedef enum LbPolicyKind {
  LB_POLICY_KIND_LIN_TS = 0,
  LB_POLICY_KIND_LIN_BUCB = 1,
} LbPolicyKind;

typedef enum LbInference {
  LB_INFERENCE_EXACT = 0,
  LB_INFERENCE_APPROXIMATE = 1,
} LbInference;

/**
 * Opaque policy handle.
 */
typedef struct LbPolicy LbPolicy;

/**
 * Confidence-radius parameters.
 */
typedef struct LbConfidence {
  double nu;
  double lambda;
  double s_bound;
  double delta;
} LbConfidence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a policy. `gamma` is read only for LinBUCB. The handle owns its
 * own random stream derived from `seed`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum LbStatus lb_policy_new(enum LbPolicyKind kind,
                            enum LbInference inference,
                            size_t dim,
                            size_t horizon,
                            struct LbConfidence confidence,
                            double gamma,
                            uint64_t seed,
                            struct LbPolicy **out);

/**
 * Releases a policy. Null is ignored.
 *
 * # Safety
 * `policy` must come from [`lb_policy_new`] and not be used afterwards.
 */
void lb_policy_free(struct LbPolicy *policy);

/**
 * Picks an arm from `n_arms` row-major arms of length `dim`.
 *
 * # Safety
 * `arms` must hold `n_arms * dim` values; `out_index` must be writable.
 */
enum LbStatus lb_policy_select(struct LbPolicy *policy,
                               const double *arms,
                               size_t n_arms,
                               size_t dim,
                               size_t *out_index);

/**
 * Absorbs the reward observed for `arm`.
 *
 * # Safety
 * `arm` must hold `dim` values.
 */
enum LbStatus lb_policy_update(struct LbPolicy *policy,
                               const double *arm,
                               size_t dim,
                               double reward);

/**
 * Copies the current point estimate into `out`.
 *
 * # Safety
 * `out` must be writable for `dim` values.
 */
enum LbStatus lb_policy_estimate(const struct LbPolicy *policy, double *out, size_t dim);

/**
 * Number of updates absorbed so far.
 *
 * # Safety
 * `out` must be writable.
 */
enum LbStatus lb_policy_step(const struct LbPolicy *policy, size_t *out);

/**
 * Confidence radius `β_t(δ)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LbStatus lb_beta(struct LbConfidence confidence, size_t step, size_t dim, double *out);

/**
 * Standard normal quantile for `p` in `(0, 1)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LbStatus lb_norm_quantile(double p, double *out);

/**
 * Closed-form `D_α(N(m1, C1), N(m2, C2))` for `dim`-dimensional Gaussians
 * with row-major covariances. Writes `+inf` and returns
 * [`LbStatus::Infinite`] when the divergence diverges.
 *
 * # Safety
 * Means must hold `dim` values and covariances `dim * dim`.
 */
enum LbStatus lb_alpha_divergence_gaussian(size_t dim,
                                           const double *mean1,
                                           const double *cov1,
                                           const double *mean2,
                                           const double *cov2,
                                           double alpha,
                                           double *out);

/**
 * Lower bound on the quantile shift under `D_α ≤ ε`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LbStatus lb_quantile_shift_bound(double gamma, double epsilon, double alpha, double *out);

/**
 * Copies the calling thread's last error message into `buf` (truncated and
 * NUL-terminated) and returns its full length in bytes, excluding the NUL.
 * Pass a null `buf` to query the length.
 *
 * # Safety
 * `buf` must be writable for `len` bytes when non-null.
 */
size_t lb_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lb_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINBANDIT_H */
