#ifndef CNSLAB_H
#define CNSLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CnslabStatus {
  CNSLAB_STATUS_OK = 0,
  CNSLAB_STATUS_NULL_POINTER = 1,
  CNSLAB_STATUS_DOMAIN = 2,
  CNSLAB_STATUS_NUMERIC = 3,
  CNSLAB_STATUS_CONFIG = 4,
  CNSLAB_STATUS_IO = 5,
  CNSLAB_STATUS_PARSE = 6,
  CNSLAB_STATUS_BUFFER_TOO_SMALL = 7,
  CNSLAB_STATUS_INVALID_UTF8 = 8,
  CNSLAB_STATUS_PANIC = 9,
} CnslabStatus;

/**
 * Entropy-pair engine at a fixed `gamma`.
 */
typedef struct CnslabKernel CnslabKernel;

/**
 * Solved Riemann problem.
 */
typedef struct CnslabWaves CnslabWaves;

/**
 * Parameters of [`cnslab_viscous_run`].
 */
typedef struct CnslabViscousSetup {
  double gamma;
  double alpha;
  double epsilon;
  double rho_left;
  double u_left;
  double rho_right;
  double u_right;
  double x_min;
  double x_max;
  size_t n_cells;
  /**
   * Half width of the smooth transition of the initial data.
   */
  double mollification_width;
  double t_end;
  double cfl;
} CnslabViscousSetup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a successful call. The pointer is
 * valid until the next cnslab call on the same thread.
 */
const char *cnslab_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cnslab_version(void);

/**
 * Builds an entropy kernel for `gamma > 1`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle pointer.
 */
enum CnslabStatus cnslab_kernel_new(double gamma, struct CnslabKernel **out);

/**
 * Releases a kernel; null is ignored.
 *
 * # Safety
 * `kernel` must come from [`cnslab_kernel_new`] and not have been freed.
 */
void cnslab_kernel_free(struct CnslabKernel *kernel);

/**
 * `∫ (1 - t^2)^lambda dt`, the factor between kernel pairs and their normalized forms. Returns
 * NaN for a null handle.
 *
 * # Safety
 * `kernel` must be a live handle or null.
 */
double cnslab_kernel_moment_mass(const struct CnslabKernel *kernel);

/**
 * Entropy pair generated by `generator` (text form such as `"1"`, `"s"`, `"s^2/2"`,
 * `"bump(-1,2)"`) at `(rho, u)`.
 *
 * # Safety
 * `kernel` must be a live handle; `generator` a NUL-terminated string; `eta` and `q` writable.
 */
enum CnslabStatus cnslab_entropy_pair(const struct CnslabKernel *kernel,
                                      const char *generator,
                                      double rho,
                                      double u,
                                      double *eta,
                                      double *q);

/**
 * Solves the Riemann problem with left state `(rho_l, u_l)` and right state `(rho_r, u_r)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CnslabStatus cnslab_riemann_solve(double gamma,
                                       double rho_l,
                                       double u_l,
                                       double rho_r,
                                       double u_r,
                                       struct CnslabWaves **out);

/**
 * Releases a wave structure; null is ignored.
 *
 * # Safety
 * `waves` must come from [`cnslab_riemann_solve`] and not have been freed.
 */
void cnslab_waves_free(struct CnslabWaves *waves);

/**
 * Star-region density and velocity (density 0 when a vacuum opens).
 *
 * # Safety
 * `waves` must be a live handle; `rho` and `u` writable.
 */
enum CnslabStatus cnslab_waves_star(const struct CnslabWaves *waves, double *rho, double *u);

/**
 * State at similarity coordinate `xi = x / t`.
 *
 * # Safety
 * `waves` must be a live handle; `rho` and `u` writable.
 */
enum CnslabStatus cnslab_waves_sample(const struct CnslabWaves *waves,
                                      double xi,
                                      double *rho,
                                      double *u);

/**
 * Runs the viscous solver from mollified Riemann data to `t_end` and writes the final cell
 * averages into `rho` and `m`, each of length `len >= n_cells`.
 *
 * # Safety
 * `setup` must be readable; `rho` and `m` must point to `len` writable doubles; `floor_events`
 * may be null.
 */
enum CnslabStatus cnslab_viscous_run(const struct CnslabViscousSetup *setup,
                                     double *rho,
                                     double *m,
                                     size_t len,
                                     uint64_t *floor_events);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CNSLAB_H */
