#ifndef EXPODE_H
#define EXPODE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Values 10 and up mirror the library's error codes.
typedef enum ExpodeStatus {
  EXPODE_STATUS_OK = 0,
  EXPODE_STATUS_NULL_POINTER = 1,
  EXPODE_STATUS_INVALID_UTF8 = 2,
  EXPODE_STATUS_PANIC = 3,
  EXPODE_STATUS_DIVISION_BY_ZERO = 10,
  EXPODE_STATUS_NOT_A_POWER = 11,
  EXPODE_STATUS_POLE_PROXIMITY = 12,
  EXPODE_STATUS_NONZERO_CONSTANT_EXPONENT = 13,
  EXPODE_STATUS_NON_POLYNOMIAL_EXPONENT = 14,
  EXPODE_STATUS_OVERFLOW = 15,
  EXPODE_STATUS_CONSTANT_POLYNOMIAL = 16,
  EXPODE_STATUS_DEGREE_MISMATCH = 17,
  EXPODE_STATUS_EQUAL_LEADING_COEFFICIENTS = 18,
  EXPODE_STATUS_TOLERANCE_NOT_MET = 19,
  EXPODE_STATUS_INVALID_INPUT = 20,
  EXPODE_STATUS_NON_REAL_ALPHA = 21,
  EXPODE_STATUS_P2_NOT_PROPORTIONAL = 22,
  EXPODE_STATUS_VERIFICATION_FAILED = 23,
  EXPODE_STATUS_KAPPA_NOT_SQUAREFREE = 24,
  EXPODE_STATUS_NON_POLYNOMIAL_RELATION = 25,
  EXPODE_STATUS_ZERO_PARAMETER = 26,
  EXPODE_STATUS_INSUFFICIENT_DATA = 27,
  EXPODE_STATUS_POLE_ON_CIRCLE = 28,
  EXPODE_STATUS_NOT_ENTIRE = 29,
  EXPODE_STATUS_POLE_ON_RAY = 30,
  EXPODE_STATUS_STEP_COLLAPSE = 31,
  EXPODE_STATUS_SYNTAX_ERROR = 32,
  EXPODE_STATUS_UNKNOWN = 99,
} ExpodeStatus;

// Opaque exponential polynomial.
typedef struct ExpodeExpPoly ExpodeExpPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. The pointer stays
// valid until the next failing call on the same thread.
const char *expode_last_error_message(void);

// Parse `text` into a new handle stored in `*out`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum ExpodeStatus expode_expoly_parse(const char *text, struct ExpodeExpPoly **out);

// # Safety
// `h` must be NULL or a handle from this library that has not been freed.
void expode_expoly_free(struct ExpodeExpPoly *h);

// Evaluate at `re + i im`.
//
// # Safety
// `h` must be a live handle; `out_re` and `out_im` writable.
enum ExpodeStatus expode_expoly_eval(const struct ExpodeExpPoly *h,
                                     double re,
                                     double im,
                                     double *out_re,
                                     double *out_im);

// Exact derivative as a new handle.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum ExpodeStatus expode_expoly_derivative(const struct ExpodeExpPoly *h,
                                           struct ExpodeExpPoly **out);

// Printed form, which parses back to an equal value. Free with
// [`expode_string_free`]. NULL for a NULL handle.
//
// # Safety
// `h` must be NULL or a live handle.
char *expode_expoly_to_string(const struct ExpodeExpPoly *h);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void expode_string_free(char *s);

// `H(z) = int_0^z beta(t) e^{p(z) - p(t)} dt` along the segment, with
// relative tolerance `rel_tol` (0 selects the default).
//
// # Safety
// `p` must be a NUL-terminated string, `beta` a live handle and the outputs
// writable.
enum ExpodeStatus expode_eval_h(const char *p,
                                const struct ExpodeExpPoly *beta,
                                double re,
                                double im,
                                double rel_tol,
                                double *out_re,
                                double *out_im);

// Solve `f^n + P(f) = b1 e^{p1} + b2 e^{alpha p1}` and write the witness as
// a JSON string to `*out_json` (free with [`expode_string_free`]).
//
// # Safety
// All string arguments must be NUL-terminated and `out_json` writable.
enum ExpodeStatus expode_tc_construct_json(uint32_t n,
                                           const char *alpha,
                                           const char *b1,
                                           const char *b2,
                                           const char *p1,
                                           char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXPODE_H */
