#ifndef PHASESLOPE_H
#define PHASESLOPE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ps_construction {
  PS_CONSTRUCTION_PRIMARY = 0,
  PS_CONSTRUCTION_RECIPROCAL = 1,
} ps_construction;

typedef enum ps_scheme {
  PS_SCHEME_ABN = 0,
  PS_SCHEME_ASN = 1,
  PS_SCHEME_ALAMOUTI = 2,
} ps_scheme;

/**
 * Result codes.
 */
typedef enum ps_status {
  PS_STATUS_OK = 0,
  PS_STATUS_NULL_POINTER = 1,
  PS_STATUS_INVALID_INPUT = 2,
  PS_STATUS_PARSE = 3,
  PS_STATUS_INFEASIBLE = 4,
  PS_STATUS_DECOMPOSITION_UNAVAILABLE = 5,
  PS_STATUS_GRID_TOO_LARGE = 6,
  PS_STATUS_CONFIG = 7,
  PS_STATUS_IO = 8,
  /**
   * An output buffer is shorter than the result.
   */
  PS_STATUS_BUFFER_TOO_SMALL = 9,
  /**
   * A Rust panic was caught at the boundary.
   */
  PS_STATUS_INTERNAL = 10,
} ps_status;

/**
 * Opaque antenna pattern.
 */
typedef struct ps_pattern ps_pattern;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length in
 * bytes, excluding the terminator. `buf` may be null to query the length.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t ps_last_error_message(char *buf, size_t len);

/**
 * Unit-gain omnidirectional pattern.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum ps_status ps_pattern_ideal_omni(struct ps_pattern **out);

/**
 * Omnidirectional pattern with `order` power ripples of `depth_db` peak to trough.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum ps_status ps_pattern_ripple_omni(double depth_db, uint32_t order, struct ps_pattern **out);

/**
 * Sector pattern pointing at azimuth 0 with half-power width `beamwidth_deg`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum ps_status ps_pattern_sector(double beamwidth_deg, double floor_db, struct ps_pattern **out);

/**
 * Loads a pattern CSV (`azimuth_deg,gain_db[,phase_deg]`).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` valid for one pointer.
 */
enum ps_status ps_pattern_load(const char *path, struct ps_pattern **out);

/**
 * Returns a copy rotated by `offset_rad`.
 *
 * # Safety
 * `pattern` must come from this library; `out` valid for one pointer.
 */
enum ps_status ps_pattern_rotated(const struct ps_pattern *pattern,
                                  double offset_rad,
                                  struct ps_pattern **out);

/**
 * Complex far-field value at azimuth `phi` (radians).
 *
 * # Safety
 * `pattern` must come from this library; `re` and `im` must be writable.
 */
enum ps_status ps_pattern_value(const struct ps_pattern *pattern,
                                double phi,
                                double *re,
                                double *im);

/**
 * Amplitude gain `|g(phi)|`.
 *
 * # Safety
 * `pattern` must come from this library; `out` must be writable.
 */
enum ps_status ps_pattern_gain(const struct ps_pattern *pattern, double phi, double *out);

/**
 * Releases a pattern. Null is ignored.
 *
 * # Safety
 * `pattern` must be null or come from this library and not be used again.
 */
void ps_pattern_free(struct ps_pattern *pattern);

/**
 * Phase-independent beamforming slopes (rad/s) for `n_rx` x `n_tx` antennas
 * over bursts of `k` packets with period `period` seconds.
 *
 * # Safety
 * `tx_out` must hold `tx_len` doubles and `rx_out` `rx_len` doubles.
 */
enum ps_status ps_abn_construct(size_t n_rx,
                                size_t n_tx,
                                size_t k,
                                double period,
                                enum ps_construction variant,
                                double *tx_out,
                                size_t tx_len,
                                double *rx_out,
                                size_t rx_len);

/**
 * Checks beamforming slopes for phase independence. Writes 1 or 0 to
 * `optimal` and the number of violated conditions to `violations`.
 *
 * # Safety
 * `tx` and `rx` must hold `n_tx` and `n_rx` doubles; outputs must be writable.
 */
enum ps_status ps_check_abn(const double *tx,
                            size_t n_tx,
                            const double *rx,
                            size_t n_rx,
                            size_t k,
                            double period,
                            double tol,
                            int *optimal,
                            size_t *violations);

/**
 * Burst sum-SNR for one channel draw.
 *
 * `tx_gains`/`psi_s`/`tx_slopes` have `n_tx` entries and
 * `rx_gains`/`psi_r`/`rx_slopes` have `n_rx`. Transmit phases and slopes
 * are only read by the beamforming scheme and may be null otherwise.
 *
 * # Safety
 * Non-null arrays must hold the stated number of doubles; `out` must be writable.
 */
enum ps_status ps_sum_snr(enum ps_scheme scheme,
                          size_t k,
                          double period,
                          size_t n_tx,
                          size_t n_rx,
                          const double *tx_gains,
                          const double *rx_gains,
                          const double *psi_s,
                          const double *psi_r,
                          const double *tx_slopes,
                          const double *rx_slopes,
                          double *out);

/**
 * `Σ_{k<K} cos(y − 2kx)` in closed form.
 */
double ps_f_closed(double x, double y, size_t k);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHASESLOPE_H */
