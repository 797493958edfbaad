#ifndef GDCONJ_H
#define GDCONJ_H

/* Generated with cbindgen:0.26.0 */

/* Generated by cbindgen from the gdconj-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible API call.
typedef enum GdcStatus {
  // The call succeeded.
  GDC_STATUS_OK = 0,
  // A pointer was null, a string was not UTF-8, or a buffer too small.
  GDC_STATUS_INVALID_ARGUMENT = 1,
  // The input did not describe a valid pair (syntax, schema, or
  // construction invariants).
  GDC_STATUS_INVALID_INPUT = 2,
  // A numeric argument was outside its mathematical domain or a depth
  // cap was exceeded.
  GDC_STATUS_DOMAIN = 3,
  // No implemented classification criterion covers the pair.
  GDC_STATUS_NO_THEOREM = 4,
  // An internal invariant failed.
  GDC_STATUS_INTERNAL = 5,
} GdcStatus;

// Classification outcome for a conjugate pair.
typedef enum GdcVerdict {
  // The conjugate functions have derivative zero almost everywhere.
  GDC_VERDICT_SINGULAR = 0,
  // The conjugate functions are continuously differentiable.
  GDC_VERDICT_SMOOTH = 1,
  // Both conjugate functions are the identity.
  GDC_VERDICT_IDENTITY = 2,
  // The implemented criteria are inconclusive.
  GDC_VERDICT_UNKNOWN = 3,
} GdcVerdict;

// Opaque handle to a validated system pair.
typedef struct GdcPair GdcPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Build a pair from TOML text describing the `f` and `g` systems.
//
// On success writes a handle to `*out`; release it with `gdc_pair_free`.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be a valid pointer.
enum GdcStatus gdc_pair_from_toml(const char *text, struct GdcPair **out);

// Build one of the built-in example pairs by name
// (`ex-affine`, `ex-lf-singular`, `ex-lf-smooth`, `ex-nonlinear`).
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be a valid pointer.
enum GdcStatus gdc_pair_example(const char *name, struct GdcPair **out);

// Release a pair handle. Passing null is a no-op.
//
// # Safety
// `pair` must be null or a handle obtained from this library that has not
// been freed already.
void gdc_pair_free(struct GdcPair *pair);

// Evaluate the conjugate function at `vertex` (0 or 1) at `x` in [0,1],
// resolving it to an enclosure of width at most `tol`, and write the
// estimate to `*out`.
//
// # Safety
// `pair` must be a live handle; `out` must be a valid pointer.
enum GdcStatus gdc_eval(const struct GdcPair *pair,
                        uint32_t vertex,
                        double x,
                        double tol,
                        double *out);

// Classify the pair and write the verdict kind to `*out`.
//
// # Safety
// `pair` must be a live handle; `out` must be a valid pointer.
enum GdcStatus gdc_classify(const struct GdcPair *pair, enum GdcVerdict *out);

// Classify the pair and return the full verdict report as a JSON string
// in `*out`. Release the string with `gdc_string_free`.
//
// # Safety
// `pair` must be a live handle; `out` must be a valid pointer.
enum GdcStatus gdc_classify_json(const struct GdcPair *pair, char **out);

// Return the validated-structure report for the pair as a JSON string in
// `*out`. Release the string with `gdc_string_free`.
//
// # Safety
// `pair` must be a live handle; `out` must be a valid pointer.
enum GdcStatus gdc_pair_json(const struct GdcPair *pair, char **out);

// Compute the largest conjugacy defect over a `grid`-point lattice per
// corner map, with per-point enclosure width `tol`, and write it to
// `*out`.
//
// # Safety
// `pair` must be a live handle; `out` must be a valid pointer.
enum GdcStatus gdc_residual_max(const struct GdcPair *pair, uint32_t grid, double tol, double *out);

// Sample the conjugate function at `vertex` at every depth-`depth`
// interval endpoint. Writes up to `cap` abscissas into `xs` and values
// into `phis` and stores the point count (2^depth + 1) in `*written`.
// Fails with `GDC_STATUS_INVALID_ARGUMENT` when `cap` is too small;
// `*written` then holds the required capacity.
//
// # Safety
// `pair` must be a live handle; `xs` and `phis` must point to `cap`
// writable doubles; `written` must be a valid pointer.
enum GdcStatus gdc_curve(const struct GdcPair *pair,
                         uint32_t vertex,
                         uint32_t depth,
                         double *xs,
                         double *phis,
                         size_t cap,
                         size_t *written);

// Copy the current thread's last error message (NUL-terminated, possibly
// truncated) into `buf` and return the full message length in bytes,
// excluding the terminator. With a null `buf` or zero `cap`, only the
// length is returned.
//
// # Safety
// `buf` must be null or point to `cap` writable bytes.
size_t gdc_last_error(char *buf, size_t cap);

// Release a string returned by this library. Passing null is a no-op.
//
// # Safety
// `s` must be null or a string obtained from this library that has not
// been freed already.
void gdc_string_free(char *s);

// Library version as a static NUL-terminated string; do not free.
const char *gdc_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GDCONJ_H */
