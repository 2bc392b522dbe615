#ifndef PADIC_TRIPLE_H
#define PADIC_TRIPLE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Operators accepted by [`pt_qexp_apply`].
 */
typedef enum PtQexpOp {
  PT_QEXP_OP_U = 0,
  PT_QEXP_OP_V = 1,
  PT_QEXP_OP_THETA = 2,
  PT_QEXP_OP_DEPLETE = 3,
} PtQexpOp;

/**
 * Result codes shared by every function.
 */
typedef enum PtStatus {
  PT_STATUS_OK = 0,
  PT_STATUS_NULL_POINTER = 1,
  PT_STATUS_INVALID_UTF8 = 2,
  PT_STATUS_DOMAIN = 3,
  PT_STATUS_PRECISION = 4,
  PT_STATUS_OVERFLOW = 5,
  PT_STATUS_IDENTITY = 6,
  PT_STATUS_DEGENERATE = 7,
  PT_STATUS_NO_CONVERGENCE = 8,
  PT_STATUS_UNSUPPORTED = 9,
  PT_STATUS_CONFIG = 10,
  PT_STATUS_PANIC = 11,
} PtStatus;

/**
 * A parsed configuration.
 */
typedef struct PtConfig PtConfig;

/**
 * A q-expansion with rational coefficients.
 */
typedef struct PtQexp PtQexp;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (nul-terminated,
 * truncated to `len`). Returns the full message length, 0 when there is none.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t pt_last_error(char *buf, size_t len);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void pt_string_free(char *s);

/**
 * Parses configuration text into a new handle.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out_config` must be writable.
 */
enum PtStatus pt_config_parse(const char *text, struct PtConfig **out_config);

/**
 * # Safety
 * `config` must be null or a handle from [`pt_config_parse`] not yet freed.
 */
void pt_config_free(struct PtConfig *config);

/**
 * Euler factor report as `key: value` lines.
 *
 * # Safety
 * `config` must be a live handle; `out_text` must be writable.
 */
enum PtStatus pt_euler_report(const struct PtConfig *config, char **out_text);

/**
 * Slope table over the configured weight grid as `key: value` lines.
 *
 * # Safety
 * `config` must be a live handle; `out_text` must be writable.
 */
enum PtStatus pt_slopes_report(const struct PtConfig *config, char **out_text);

/**
 * Runs a verification suite (or `"all"`) and reports the number of failed checks.
 *
 * # Safety
 * `suite` must be a nul-terminated string; `out_failed` must be writable.
 */
enum PtStatus pt_verify(const char *suite, size_t *out_failed);

/**
 * Creates an empty q-expansion for prime `p` with exponent cap `cap`.
 *
 * # Safety
 * `out_qexp` must be writable.
 */
enum PtStatus pt_qexp_new(uint64_t p, uint64_t cap, struct PtQexp **out_qexp);

/**
 * # Safety
 * `qexp` must be null or a live q-expansion handle.
 */
void pt_qexp_free(struct PtQexp *qexp);

/**
 * Adds `num/den · f_alpha`.
 *
 * # Safety
 * `qexp` must be a live handle not aliased elsewhere.
 */
enum PtStatus pt_qexp_add_term(struct PtQexp *qexp, uint64_t alpha, int64_t num, int64_t den);

/**
 * Number of nonzero terms.
 *
 * # Safety
 * `qexp` must be a live handle; `out_len` must be writable.
 */
enum PtStatus pt_qexp_len(const struct PtQexp *qexp, size_t *out_len);

/**
 * Coefficient of `f_alpha` as a reduced fraction; fails with `Overflow` when
 * it does not fit in 64 bits.
 *
 * # Safety
 * `qexp` must be a live handle; `out_num` and `out_den` must be writable.
 */
enum PtStatus pt_qexp_coeff(const struct PtQexp *qexp,
                            uint64_t alpha,
                            int64_t *out_num,
                            int64_t *out_den);

/**
 * Applies an operator, returning a new handle.
 *
 * # Safety
 * `qexp` must be a live handle; `out_qexp` must be writable.
 */
enum PtStatus pt_qexp_apply(const struct PtQexp *qexp, enum PtQexpOp op, struct PtQexp **out_qexp);

/**
 * Renders as `alpha:coeff` lines.
 *
 * # Safety
 * `qexp` must be a live handle; `out_text` must be writable.
 */
enum PtStatus pt_qexp_to_string(const struct PtQexp *qexp, char **out_text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADIC_TRIPLE_H */
