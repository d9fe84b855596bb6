#ifndef SINETYPE_H
#define SINETYPE_H

/* This file is generated by cbindgen from sinetype-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes mirroring the CLI exit classes.
typedef enum StStatus {
  ST_STATUS_OK = 0,
  // Null pointer, bad UTF-8 or malformed JSON.
  ST_STATUS_INVALID_ARGUMENT = 1,
  // Input parsed but violated a precondition.
  ST_STATUS_PRECONDITION = 2,
  // A numerical stage failed (contraction, contour, patch system...).
  ST_STATUS_NUMERICAL = 3,
  // A verification step rejected the result.
  ST_STATUS_VERIFICATION = 4,
  // Library panicked; state is still consistent.
  ST_STATUS_INTERNAL = 5,
} StStatus;

// Opaque handle to a normalized sine-type function.
typedef struct StSineType StSineType;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message for this thread into `buf` (NUL-terminated,
// truncated to `cap`); returns the full message length in bytes.
//
// # Safety
// `buf` must point to at least `cap` writable bytes, or be null (query the
// length without copying).
uintptr_t st_last_error_message(char *buf, uintptr_t cap);

// Frees a string returned by this library.
//
// # Safety
// `s` must originate from a `st_*` call and not have been freed already.
void st_string_free(char *s);

// Builds a sine-type function from coefficient JSON `{"N":…,"re":[…],"im":[…]}`.
//
// # Safety
// `f_json` must be a NUL-terminated string; `out` must be a valid pointer.
enum StStatus st_sinetype_from_coeff_json(const char *f_json, struct StSineType **out);

// Serializes the handle to the SineType JSON schema.
//
// # Safety
// `h` must be a live handle; `out` receives a string owned by the caller.
enum StStatus st_sinetype_to_json(const struct StSineType *h, char **out);

// # Safety
// `h` must come from `st_sinetype_from_coeff_json` and not be freed twice.
void st_sinetype_free(struct StSineType *h);

// Evaluates `F(z)`.
//
// # Safety
// `h` must be a live handle; `out_re`/`out_im` must be valid pointers.
enum StStatus st_sinetype_evaluate(const struct StSineType *h,
                                   double z_re,
                                   double z_im,
                                   double *out_re,
                                   double *out_im);

// Evaluates `F^{(order)}(z)` for `order ≤ 8`.
//
// # Safety
// Same contract as [`st_sinetype_evaluate`].
enum StStatus st_sinetype_evaluate_derivative(const struct StSineType *h,
                                              double z_re,
                                              double z_im,
                                              uintptr_t order,
                                              double *out_re,
                                              double *out_im);

// Argument-principle zero count in the disk |z - center| ≤ radius.
//
// # Safety
// `h` must be a live handle; `out_count` must be a valid pointer.
enum StStatus st_count_zeros_disk(const struct StSineType *h,
                                  double center_re,
                                  double center_im,
                                  double radius,
                                  int64_t *out_count);

// Certified zero enumeration; returns the ZeroSet JSON.
//
// # Safety
// `h` must be a live handle; `out_json` receives a caller-owned string.
enum StStatus st_localize_all(const struct StSineType *h,
                              uintptr_t n_max,
                              const char *config_json,
                              char **out_json);

// Forward map f ↦ (g, zeros); takes coefficient JSON, returns the
// ForwardResult JSON `{"g":…,"zeros":…,"n1":…,"certified":…,"contraction_ratios":…}`.
//
// # Safety
// `f_json` must be NUL-terminated; `out_json` receives a caller-owned string.
enum StStatus st_forward_map(const char *f_json, const char *config_json, char **out_json);

// Inverse map g ↦ f; takes coefficient JSON, returns the InverseResult JSON
// `{"f":…,"m":…,"eps":…,"alphas":…,"residuals":…,"condition_number":…}`.
//
// # Safety
// `g_json` must be NUL-terminated; `out_json` receives a caller-owned string.
enum StStatus st_inverse_map(const char *g_json, const char *config_json, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SINETYPE_H */
