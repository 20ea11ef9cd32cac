#ifndef ROTORSYM_H
#define ROTORSYM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Equations of motion to integrate.
 */
typedef enum RsPicture {
  RS_PICTURE_CANONICAL = 0,
  RS_PICTURE_TWISTED = 1,
  RS_PICTURE_FORCE = 2,
  RS_PICTURE_EULER_FLOW = 3,
} RsPicture;

/**
 * Result codes. `RS_STATUS_OK` is zero; everything else is an error.
 */
typedef enum RsStatus {
  RS_STATUS_OK = 0,
  RS_STATUS_NULL_POINTER = 1,
  RS_STATUS_INVALID_ARGUMENT = 2,
  RS_STATUS_CONFIG = 3,
  RS_STATUS_DIVERGENCE = 4,
  RS_STATUS_LOOP_FORMAT = 5,
  RS_STATUS_UNSUPPORTED = 6,
  RS_STATUS_IO = 7,
  RS_STATUS_PANIC = 8,
} RsStatus;

/**
 * Opaque problem handle.
 */
typedef struct RsProblem RsProblem;

/**
 * Opaque trajectory handle.
 */
typedef struct RsTrajectory RsTrajectory;

/**
 * Outcome of an orbit search.
 */
typedef struct RsOrbitSummary {
  int converged;
  size_t iterations;
  double fixed_point_defect;
  double force_defect;
  double gradient_defect;
  /**
   * Initial state of the orbit in picture coordinates.
   */
  double state[4];
} RsOrbitSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *rs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rs_version(void);

/**
 * Parse a JSON problem description (same format as the CLI `--config`).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_problem` writable.
 */
enum RsStatus rs_problem_from_json(const char *json, struct RsProblem **out_problem);

/**
 * Rotating frame with `ω(t) = c0 + Σ a_k cos 2πkt + Σ b_k sin 2πkt`.
 *
 * # Safety
 * `cos_coeffs` and `sin_coeffs` must hold `n_cos` and `n_sin` doubles (or
 * be NULL when the count is zero).
 */
enum RsStatus rs_problem_merry_go_round(double c0,
                                        const double *cos_coeffs,
                                        size_t n_cos,
                                        const double *sin_coeffs,
                                        size_t n_sin,
                                        struct RsProblem **out_problem);

/**
 * New problem with the scalar potential folded into the vector potential.
 *
 * # Safety
 * `problem_in` must be a live handle and `out_problem` writable.
 */
enum RsStatus rs_problem_eliminate_scalar(const struct RsProblem *problem_in,
                                          struct RsProblem **out_problem);

/**
 * Release a problem. NULL is ignored.
 *
 * # Safety
 * `problem` must come from this library and not be used afterwards.
 */
void rs_problem_free(struct RsProblem *problem);

/**
 * Vector field of `picture` at `(t, z)`, written to `out_rhs[4]`.
 *
 * # Safety
 * `z` and `out_rhs` must point to 4 doubles.
 */
enum RsStatus rs_rhs(const struct RsProblem *problem_in,
                     enum RsPicture picture,
                     double t,
                     const double *z,
                     double *out_rhs);

/**
 * Acceleration `q̈` of the force equation at `(t, q, q̇)`, written to `out_acc[2]`.
 *
 * # Safety
 * `q` and `qdot` must point to 2 doubles, `out_acc` to 2 writable doubles.
 */
enum RsStatus rs_force(const struct RsProblem *problem_in,
                       double t,
                       const double *q,
                       const double *qdot,
                       double *out_acc);

/**
 * RK4 over `[t0, t1]` with `steps` steps.
 *
 * # Safety
 * `z0` must point to 4 doubles and `out_trajectory` be writable.
 */
enum RsStatus rs_integrate(const struct RsProblem *problem_in,
                           enum RsPicture picture,
                           const double *z0,
                           double t0,
                           double t1,
                           size_t steps,
                           struct RsTrajectory **out_trajectory);

/**
 * State after one unit of time from `t = 0`, written to `out_state[4]`.
 *
 * # Safety
 * `z0` and `out_state` must point to 4 doubles.
 */
enum RsStatus rs_time_one_map(const struct RsProblem *problem_in,
                              enum RsPicture picture,
                              const double *z0,
                              size_t steps,
                              double *out_state);

/**
 * Number of stored states, `steps + 1`. Zero for NULL.
 *
 * # Safety
 * `trajectory` must be NULL or a live handle.
 */
size_t rs_trajectory_len(const struct RsTrajectory *trajectory);

/**
 * Row `k` as `(t, q1, q2, p1, p2)` in `out_row[5]`.
 *
 * # Safety
 * `trajectory` must be a live handle and `out_row` point to 5 doubles.
 */
enum RsStatus rs_trajectory_row(const struct RsTrajectory *trajectory, size_t k, double *out_row);

/**
 * Release a trajectory. NULL is ignored.
 *
 * # Safety
 * `trajectory` must come from this library and not be used afterwards.
 */
void rs_trajectory_free(struct RsTrajectory *trajectory);

/**
 * Discrete classical action of a loop sampled at `t = i/n`; `q` holds `2n`
 * doubles `(q1, q2)` per sample.
 *
 * # Safety
 * `q` must point to `2 * n` doubles and `out_value` be writable.
 */
enum RsStatus rs_classical_action(const struct RsProblem *problem_in,
                                  const double *q,
                                  size_t n,
                                  double *out_value);

/**
 * Discrete symplectic action of a phase loop; `q` and `p` hold `2n`
 * doubles each.
 *
 * # Safety
 * `q` and `p` must point to `2 * n` doubles and `out_value` be writable.
 */
enum RsStatus rs_symplectic_action(const struct RsProblem *problem_in,
                                   const double *q,
                                   const double *p,
                                   size_t n,
                                   double *out_value);

/**
 * Shooting search for a 1-periodic orbit from `guess[4]`. Non-convergence
 * is not an error: check `summary.converged`.
 *
 * # Safety
 * `guess` must point to 4 doubles and `summary` be writable.
 */
enum RsStatus rs_find_orbit_shooting(const struct RsProblem *problem_in,
                                     enum RsPicture picture,
                                     const double *guess,
                                     double tol,
                                     size_t max_iter,
                                     struct RsOrbitSummary *summary);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROTORSYM_H */
