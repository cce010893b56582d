#ifndef FRECHET_SWEEP_H
#define FRECHET_SWEEP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FsMode {
  FsMode_Oracle = 0,
  FsMode_Events = 1,
} FsMode;

typedef enum FsStatus {
  FsStatus_Ok = 0,
  FsStatus_NullPointer = 1,
  FsStatus_InvalidArgument = 2,
  FsStatus_Parse = 3,
  FsStatus_Degenerate = 4,
  FsStatus_Internal = 5,
} FsStatus;

/**
 * An owned polygonal curve.
 */
typedef struct FsCurve FsCurve;

/**
 * An owned list of closed intervals.
 */
typedef struct FsIntervals FsIntervals;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a curve from `n` interleaved coordinates `x0, y0, x1, y1, ...`.
 *
 * # Safety
 * `xy` must point to `2 * n` readable doubles; `out` must be writable.
 */
enum FsStatus fs_curve_new(const double *xy, uintptr_t n, struct FsCurve **out);

/**
 * Parses a curve in the text file format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum FsStatus fs_curve_parse(const char *text, struct FsCurve **out);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `curve` must be null or a live handle.
 */
uintptr_t fs_curve_len(const struct FsCurve *curve);

/**
 * # Safety
 * `curve` must be null or a handle not yet freed.
 */
void fs_curve_free(struct FsCurve *curve);

/**
 * Writes 1 to `out` if d_F(pi, sigma) <= delta, else 0.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum FsStatus fs_decide(const struct FsCurve *pi,
                        const struct FsCurve *sigma,
                        double delta,
                        int32_t *out);

/**
 * Fréchet distance within `value_tol`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum FsStatus fs_frechet(const struct FsCurve *pi,
                         const struct FsCurve *sigma,
                         double value_tol,
                         double *out);

/**
 * Feasible `λ` in `[lo, hi]` for `d_F(pi, sigma + λ(dx, dy)) <= delta`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum FsStatus fs_sweep(const struct FsCurve *pi,
                       const struct FsCurve *sigma,
                       double dx,
                       double dy,
                       double delta,
                       double lo,
                       double hi,
                       struct FsIntervals **out);

/**
 * # Safety
 * `list` must be null or a live handle.
 */
uintptr_t fs_intervals_len(const struct FsIntervals *list);

/**
 * # Safety
 * `list` must be live; `lo` and `hi` must be writable.
 */
enum FsStatus fs_intervals_get(const struct FsIntervals *list, uintptr_t k, double *lo, double *hi);

/**
 * # Safety
 * `list` must be null or a handle not yet freed.
 */
void fs_intervals_free(struct FsIntervals *list);

/**
 * Is there a translation `t` with `d_F(pi, sigma + t) <= delta`? On success
 * `found` is 1 or 0 and `(tx, ty)` holds the witness when found.
 *
 * # Safety
 * Handles must be live; output pointers must be writable.
 */
enum FsStatus fs_xlate2d(const struct FsCurve *pi,
                         const struct FsCurve *sigma,
                         double delta,
                         enum FsMode mode,
                         int32_t *found,
                         double *tx,
                         double *ty);

/**
 * Message of the last failed call on this thread (empty after a success).
 * Valid until the next call on this thread.
 */
const char *fs_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRECHET_SWEEP_H */
