#ifndef DYNAMIC_MWM_H
#define DYNAMIC_MWM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum {
  DMWM_STATUS_OK = 0,
  DMWM_STATUS_NULL_POINTER = 1,
  DMWM_STATUS_INVALID_ARGUMENT = 2,
  DMWM_STATUS_SELF_LOOP = 3,
  DMWM_STATUS_DUPLICATE_EDGE = 4,
  DMWM_STATUS_UNKNOWN_EDGE = 5,
  DMWM_STATUS_VERTEX_OUT_OF_RANGE = 6,
  DMWM_STATUS_INVALID_WEIGHT = 7,
  DMWM_STATUS_INVARIANT_VIOLATED = 8,
} DmwmStatus;

/**
 * Opaque engine handle.
 */
typedef struct DmwmEngine DmwmEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a plain-mode engine on `n` vertices with level base `alpha`
 * (must be > 1).
 */
DmwmStatus dmwm_engine_new_plain(uintptr_t n, double alpha, DmwmEngine **out);

/**
 * Create a rounded-mode engine. Pass `r` in (0,1] to fix the offset, or
 * any value <= 0 to draw it from `seed`.
 */
DmwmStatus dmwm_engine_new_rounded(uintptr_t n,
                                   double alpha,
                                   double r,
                                   uint64_t seed,
                                   DmwmEngine **out);

/**
 * Release an engine. A null handle is a no-op.
 *
 * # Safety
 * `handle` must be null or a pointer previously returned by an engine
 * constructor and not yet freed.
 */
void dmwm_engine_free(DmwmEngine *handle);

/**
 * Insert edge (u,v) with weight w (> 0, finite).
 *
 * # Safety
 * `handle` must be a live engine pointer.
 */
DmwmStatus dmwm_engine_insert(DmwmEngine *handle, uintptr_t u, uintptr_t v, double w);

/**
 * Delete a previously inserted edge (u,v).
 *
 * # Safety
 * `handle` must be a live engine pointer.
 */
DmwmStatus dmwm_engine_delete(DmwmEngine *handle, uintptr_t u, uintptr_t v);

/**
 * Total original weight of the maintained matching.
 *
 * # Safety
 * `handle` must be a live engine pointer; `out` must be writable.
 */
DmwmStatus dmwm_engine_matching_weight(const DmwmEngine *handle, double *out);

/**
 * Number of edges in the maintained matching.
 *
 * # Safety
 * `handle` must be a live engine pointer; `out` must be writable.
 */
DmwmStatus dmwm_engine_matching_size(const DmwmEngine *handle, uintptr_t *out);

/**
 * Mate of `v` in the maintained matching, or -1 if `v` is free.
 *
 * # Safety
 * `handle` must be a live engine pointer; `out` must be writable.
 */
DmwmStatus dmwm_engine_mate_of(const DmwmEngine *handle, uintptr_t v, int64_t *out);

/**
 * The engine's rounding offset r (0 in plain mode).
 *
 * # Safety
 * `handle` must be a live engine pointer; `out` must be writable.
 */
DmwmStatus dmwm_engine_offset(const DmwmEngine *handle, double *out);

/**
 * Run the full structural invariant audit.
 *
 * # Safety
 * `handle` must be a live engine pointer.
 */
DmwmStatus dmwm_engine_check_invariants(const DmwmEngine *handle);

/**
 * Worst-case plain-mode ratio `2a/(a-1) + 2a`; NaN if alpha <= 1.
 */
double dmwm_plain_ratio(double alpha);

/**
 * Expected rounded-mode ratio `2a^2 ln a/(a-1)^2`; NaN if alpha <= 1.
 */
double dmwm_rounded_ratio(double alpha);

/**
 * Alpha minimizing the rounded ratio, and the ratio at that alpha.
 */
DmwmStatus dmwm_optimal_alpha(double *out_alpha, double *out_ratio);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DYNAMIC_MWM_H */
