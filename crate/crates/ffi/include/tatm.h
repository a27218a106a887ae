#ifndef TATM_H
#define TATM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TatmStatus {
  TATM_STATUS_OK = 0,
  TATM_STATUS_NULL_POINTER = 1,
  TATM_STATUS_INVALID_UTF8 = 2,
  TATM_STATUS_CONFIG = 3,
  TATM_STATUS_PHYSICS = 4,
  TATM_STATUS_BUFFER_TOO_SMALL = 5,
  TATM_STATUS_PANIC = 6,
} TatmStatus;

typedef enum TatmLabel {
  TATM_LABEL_NONE = 0,
  TATM_LABEL_SUDDEN_DEATH = 1,
  TATM_LABEL_DEAD_INSTANTS = 2,
  TATM_LABEL_ALWAYS_LIVING = 3,
} TatmLabel;

/**
 * A prepared scenario and its propagated state.
 */
typedef struct TatmTrajectory TatmTrajectory;

/**
 * Summary of a classified concurrence series. Times without a value are NaN.
 */
typedef struct TatmVerdict {
  enum TatmLabel label;
  bool generated;
  double first_generation_time;
  double max_value;
  uintptr_t dead_intervals;
  uintptr_t isolated_zeros;
  double horizon;
} TatmVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *tatm_version(void);

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated) and returns the buffer size it needs, including the NUL.
 * Passing a null `buf` or a short `len` only reports the size.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
uintptr_t tatm_last_error(char *buf, uintptr_t len);

/**
 * Parses a config (TOML text), resolves scenario `name` and propagates its
 * initial state. On success `*out` owns a new handle.
 *
 * # Safety
 * `config` and `name` must be NUL-terminated strings; `out` must be valid
 * for a write.
 */
enum TatmStatus tatm_trajectory_new(const char *config,
                                    const char *name,
                                    struct TatmTrajectory **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle from [`tatm_trajectory_new`] not yet freed.
 */
void tatm_trajectory_free(struct TatmTrajectory *h);

/**
 * Atom-atom density matrix at time `t`, row-major, as 16 interleaved
 * (re, im) pairs in `out[32]`. Basis order ee, eg, ge, gg.
 *
 * # Safety
 * `h` must be a live handle and `out` valid for 32 doubles.
 */
enum TatmStatus tatm_trajectory_atomic_state(const struct TatmTrajectory *h, double t, double *out);

/**
 * Concurrence at each of `n` times.
 *
 * # Safety
 * `h` must be a live handle; `times` and `out` valid for `n` doubles.
 */
enum TatmStatus tatm_trajectory_concurrence(const struct TatmTrajectory *h,
                                            const double *times,
                                            uintptr_t n,
                                            double *out);

/**
 * Number of samples and horizon of the scenario's own time grid.
 *
 * # Safety
 * `h` must be a live handle; the out pointers valid for writes.
 */
enum TatmStatus tatm_trajectory_grid(const struct TatmTrajectory *h,
                                     uintptr_t *samples,
                                     double *t_max);

/**
 * Classifies the concurrence series over the scenario's grid.
 *
 * # Safety
 * `h` must be a live handle and `out` valid for a write.
 */
enum TatmStatus tatm_trajectory_classify(const struct TatmTrajectory *h, struct TatmVerdict *out);

/**
 * Concurrence of a two-qubit density matrix given as 16 interleaved
 * (re, im) pairs, row-major.
 *
 * # Safety
 * `rho` must be valid for 32 doubles and `out` for a write.
 */
enum TatmStatus tatm_concurrence(const double *rho, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TATM_H */
