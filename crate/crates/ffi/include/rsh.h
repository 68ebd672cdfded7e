#ifndef RSH_H
#define RSH_H

/* Generated by cbindgen from the rsh-ffi sources; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RshStatus {
  RSH_STATUS_OK = 0,
  RSH_STATUS_NULL_POINTER = 1,
  RSH_STATUS_INVALID_PARAMS = 2,
  RSH_STATUS_OUT_OF_DOMAIN = 3,
  RSH_STATUS_CURVATURE_VANISHES = 4,
  RSH_STATUS_INSUFFICIENT_SAMPLES = 5,
  RSH_STATUS_INVALID_SAMPLES = 6,
  RSH_STATUS_NUMERICAL = 7,
  RSH_STATUS_INTERNAL = 8,
} RshStatus;

/**
 * Opaque handle to one family member and the parameter interval it is defined on.
 */
typedef struct RshHelix RshHelix;

typedef struct RshFrenet {
  double t[3];
  double n[3];
  double b[3];
  double kappa;
  double tau;
  double sigma;
} RshFrenet;

typedef struct RshAnalysis {
  double c1_hat;
  double c2_hat;
  double rms_residual;
  bool is_rectifying;
  double sigma_mean;
  double sigma_max_dev;
  bool is_slant;
  double normal_leak_max;
  bool in_rectifying_plane;
  bool verdict;
} RshAnalysis;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a family member on `[s_min, s_max]`. `*out` receives a handle to release with
 * [`rsh_helix_free`], and is set to null on failure.
 *
 * # Safety
 * `out` must be null or valid for a pointer write.
 */
enum RshStatus rsh_helix_new(double c1,
                             double c2,
                             double cos_theta,
                             double s_min,
                             double s_max,
                             struct RshHelix **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `helix` must be null or a handle from [`rsh_helix_new`] that was not freed yet.
 */
void rsh_helix_free(struct RshHelix *helix);

/**
 * Writes `α(s)` as three doubles.
 *
 * # Safety
 * `helix` must be a live handle; `out` must point to three writable doubles.
 */
enum RshStatus rsh_helix_position(const struct RshHelix *helix, double s, double *out);

/**
 * Frenet frame, curvature, torsion and `σ` at `s`.
 *
 * # Safety
 * `helix` must be a live handle; `out` must be valid for a write.
 */
enum RshStatus rsh_helix_frenet(const struct RshHelix *helix, double s, struct RshFrenet *out);

/**
 * Runs the closed-form verification suite on `n` uniform points of `[s_min, s_max]`.
 * `*overall` receives the combined verdict. When `report_json` is not null it receives a
 * JSON report to release with [`rsh_string_free`].
 *
 * # Safety
 * `helix` must be a live handle; `overall` must be valid for a write; `report_json` must be
 * null or valid for a pointer write.
 */
enum RshStatus rsh_helix_verify(const struct RshHelix *helix,
                                double s_min,
                                double s_max,
                                size_t n,
                                bool *overall,
                                char **report_json);

/**
 * Classifies `len` unit-speed samples. `s` holds the parameters (strictly increasing) and
 * `xyz` the positions as `len` consecutive triples.
 *
 * # Safety
 * `s` must point to `len` doubles, `xyz` to `3·len` doubles, and `out` must be valid for a
 * write.
 */
enum RshStatus rsh_analyze_samples(const double *s,
                                   const double *xyz,
                                   size_t len,
                                   struct RshAnalysis *out);

/**
 * Message for the most recent failure on this thread, or null after a success. The
 * pointer stays valid until the next call into this library from the same thread.
 */
const char *rsh_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `text` must be null or a string from this library that was not freed yet.
 */
void rsh_string_free(char *text);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rsh_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RSH_H */
