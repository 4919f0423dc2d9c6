/* Copyright 2026 gausswit Contributors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef GAUSSWIT_H
#define GAUSSWIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Side of the moment table written by [`gw_moments`].
 */
#define GW_MOMENT_TABLE_SIDE 4

/**
 * Status codes of every fallible call.
 */
typedef enum GwStatus {
  GW_STATUS_OK = 0,
  GW_STATUS_NULL_POINTER = 1,
  GW_STATUS_INVALID_ARGUMENT = 2,
  GW_STATUS_NUMERIC = 3,
  GW_STATUS_PANIC = 4,
} GwStatus;

/**
 * Opaque two-mode Gaussian state.
 */
typedef struct GwState GwState;

/**
 * Intensity-moment witnesses of a state.
 */
typedef struct GwWitnesses {
  double r1;
  double r2;
  double m;
} GwWitnesses;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Vacuum of `modes` (1 or 2) modes.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum GwStatus gw_state_vacuum(uint32_t modes, struct GwState **out);

/**
 * Squeezed vacuum with `b_sq` photons, thermal noise `bn` and stimulating
 * field `xi`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum GwStatus gw_state_shg(double b_sq,
                           double bn,
                           double xi_re,
                           double xi_im,
                           struct GwState **out);

/**
 * Twin beam with `b_p` photons per mode, signal/idler noise and stimulating
 * fields.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum GwStatus gw_state_twin(double b_p,
                            double bs,
                            double bi,
                            double xi1_re,
                            double xi1_im,
                            double xi2_re,
                            double xi2_im,
                            struct GwState **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `state` must be null or a live handle not used afterwards.
 */
void gw_state_free(struct GwState *state);

/**
 * Applies a beam splitter with transmissivity `t` and phase `theta`
 * (radians) in place.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum GwStatus gw_apply_beam_splitter(struct GwState *state, double t, double theta);

/**
 * Displaces both modes in place.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum GwStatus gw_displace(struct GwState *state,
                          double d1_re,
                          double d1_im,
                          double d2_re,
                          double d2_im);

/**
 * Adds thermal noise to both modes in place.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum GwStatus gw_add_noise(struct GwState *state, double bn1, double bn2);

/**
 * Mean photon numbers of both modes.
 *
 * # Safety
 * `state` must be a live handle; `n1` and `n2` valid for one write each.
 */
enum GwStatus gw_mean_photons(const struct GwState *state, double *n1, double *n2);

/**
 * Writes `<W1^a W2^b>` to `out[a * 4 + b]` for `a + b <= 3`; other entries
 * are NaN.
 *
 * # Safety
 * `state` must be a live handle; `out` valid for 16 writes.
 */
enum GwStatus gw_moments(const struct GwState *state, double *out);

/**
 * Witnesses `R1`, `R2` and `M` of a state.
 *
 * # Safety
 * `state` must be a live handle; `out` valid for one write.
 */
enum GwStatus gw_witnesses(const struct GwState *state, struct GwWitnesses *out);

/**
 * Message of the last failed call on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *gw_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gw_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUSSWIT_H */
