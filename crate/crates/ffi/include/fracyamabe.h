#ifndef FRACYAMABE_H
#define FRACYAMABE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define FY_METHOD_GAMMA 0

#define FY_METHOD_SYMBOL 1

#define FY_METHOD_BOTH 2

#define FY_CLASS_CONSTANT 0

#define FY_CLASS_NONCONSTANT 1

#define FY_CLASS_AMBIGUOUS 2

/**
 * Status codes.
 */
typedef enum FyStatus {
  FY_STATUS_OK = 0,
  FY_STATUS_NULL_POINTER = 1,
  FY_STATUS_INVALID_PARAMS = 2,
  FY_STATUS_NUMERICAL = 3,
  FY_STATUS_BUFFER_TOO_SMALL = 4,
  FY_STATUS_NOT_CONVERGED = 5,
  FY_STATUS_PANIC = 6,
} FyStatus;

/**
 * Opaque model handle: `(n, γ)` and the derived kernel constants.
 */
typedef struct FyModel FyModel;

/**
 * Opaque result of [`fy_solve`].
 */
typedef struct FySolution FySolution;

/**
 * Scalar summary of a solution.
 */
typedef struct FySolutionSummary {
  double period;
  size_t grid_size;
  double c_value;
  double cstar_value;
  double residual;
  double amplitude;
  size_t iterations;
  bool converged;
  /**
   * One of the `FY_CLASS_*` constants.
   */
  int32_t classification;
} FySolutionSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a model for `n >= 2 + 2γ`, `γ ∈ (0, 1)`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum FyStatus fy_model_new(uint32_t n, double gamma, struct FyModel **out);

/**
 * Like [`fy_model_new`] but only requires `n >= 2`, `γ ∈ (0, 1)`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum FyStatus fy_model_new_extended(uint32_t n, double gamma, struct FyModel **out);

/**
 * Release a model. Null is ignored.
 *
 * # Safety
 * `model` must be null or a handle from `fy_model_new*` not yet freed.
 */
void fy_model_free(struct FyModel *model);

/**
 * Critical exponent `β` and constant `c_{n,γ}` of the model.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum FyStatus fy_model_constants(const struct FyModel *model, double *beta, double *c_ngamma);

/**
 * `K(ξ)`, `ξ ≠ 0`.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum FyStatus fy_kernel(const struct FyModel *model, double xi, double *out);

/**
 * `K_L(ξ)` with truncation tolerance `tol`.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum FyStatus fy_kernel_periodized(const struct FyModel *model,
                                   double period,
                                   double xi,
                                   double tol,
                                   double *out);

/**
 * Fourier multipliers `θ_k`, `k = 0..=grid_size/2`, written to `out`,
 * which must hold at least `grid_size/2 + 1` values.
 *
 * # Safety
 * `out` must be null or valid for `out_len` writes.
 */
enum FyStatus fy_multipliers(const struct FyModel *model,
                             double period,
                             size_t grid_size,
                             double *out,
                             size_t out_len);

/**
 * First eigenvalue `δ_L` of the linearization at the constant, by the
 * Gamma-ratio formula or the quadrature symbol.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum FyStatus fy_delta(const struct FyModel *model,
                       double period,
                       uint32_t method_code,
                       double *out);

/**
 * Bifurcation period `L₀`. With `FY_METHOD_BOTH`, `agreement` receives the
 * relative difference of the two roots; otherwise NaN. `agreement` may be null.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum FyStatus fy_find_l0(const struct FyModel *model,
                         uint32_t method_code,
                         double *l0,
                         double *agreement);

/**
 * Minimize the energy quotient at period `period` on `grid_size` points.
 * `tol <= 0` selects the default residual tolerance. A non-converged run
 * still produces a solution handle and returns [`FyStatus::NotConverged`].
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum FyStatus fy_solve(const struct FyModel *model,
                       double period,
                       size_t grid_size,
                       uint64_t seed,
                       double tol,
                       struct FySolution **out);

/**
 * # Safety
 * Pointers must be null or valid.
 */
enum FyStatus fy_solution_summary(const struct FySolution *solution, struct FySolutionSummary *out);

/**
 * Copy the normalized profile values `v(t_j)`, `t_j = jL/N`, into `out`.
 *
 * # Safety
 * `out` must be null or valid for `out_len` writes.
 */
enum FyStatus fy_solution_profile(const struct FySolution *solution, double *out, size_t out_len);

/**
 * Release a solution. Null is ignored.
 *
 * # Safety
 * `solution` must be null or a handle from `fy_solve` not yet freed.
 */
void fy_solution_free(struct FySolution *solution);

/**
 * Copy the last error message of this thread, NUL-terminated and truncated
 * to `len` bytes, into `buf`. Returns the full message length without the
 * terminator, or 0 if there is none. `buf` may be null to query the length.
 *
 * # Safety
 * `buf` must be null or valid for `len` writes.
 */
size_t fy_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fy_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACYAMABE_H */
