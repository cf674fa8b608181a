#ifndef KISSLAT_H
#define KISSLAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  KL_STATUS_OK = 0,
  KL_STATUS_NULL_POINTER = 1,
  KL_STATUS_INVALID_UTF8 = 2,
  KL_STATUS_PARSE = 3,
  KL_STATUS_FIELD = 4,
  KL_STATUS_RANK_DEFICIENT = 5,
  KL_STATUS_GUARD = 6,
  KL_STATUS_SEARCH_EXHAUSTED = 7,
  KL_STATUS_INVALID_CODE = 8,
  KL_STATUS_MISMATCH = 9,
  KL_STATUS_DOMAIN = 10,
  KL_STATUS_PRECONDITION = 11,
  KL_STATUS_UNKNOWN_FORMAT = 12,
  KL_STATUS_BUFFER_TOO_SMALL = 13,
  KL_STATUS_PANIC = 14,
} KlStatus;

/**
 * Opaque binary code.
 */
typedef struct KlCode KlCode;

/**
 * Opaque lattice basis.
 */
typedef struct KlLattice KlLattice;

/**
 * Short-vector counts up to a norm cap. `min_norm` is 0 when no nonzero
 * vector lies within the cap.
 */
typedef struct {
  uint64_t min_norm;
  uint64_t kissing;
} KlShortVectors;

/**
 * Constants of the asymptotic bound.
 */
typedef struct {
  double e3_half;
  double kissing_exponent_constant;
  double rho0_q64;
  double delta0;
  double e3_zero_low;
  double e3_zero_high;
  double suggested_c0;
} KlBoundsConstants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *kl_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *kl_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed at most once.
 */
void kl_string_free(char *s);

/**
 * Parses a code in the `binary-code n=<n> k=<k>` text format.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
KlStatus kl_code_parse(const char *text, KlCode **out);

/**
 * # Safety
 * `code` must be null or a handle from [`kl_code_parse`], freed at most once.
 */
void kl_code_free(KlCode *code);

/**
 * Length n; 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t kl_code_length(const KlCode *code);

/**
 * Dimension k; 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t kl_code_dimension(const KlCode *code);

/**
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
KlStatus kl_code_is_self_orthogonal(const KlCode *code, bool *out);

/**
 * Writes A_0..A_n into `counts`, which must hold at least n + 1 entries.
 *
 * # Safety
 * `code` must be a live handle and `counts` must point to `len` writable
 * `uint64_t` values.
 */
KlStatus kl_code_weight_distribution(const KlCode *code, uint64_t *counts, size_t len);

/**
 * Hermite basis of the span lattice of `code`.
 *
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
KlStatus kl_lattice_build(const KlCode *code, KlLattice **out);

/**
 * Parses a basis in the `lattice n=<n>` text format.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
KlStatus kl_lattice_parse(const char *text, KlLattice **out);

/**
 * # Safety
 * `lattice` must be null or a handle from this library, freed at most once.
 */
void kl_lattice_free(KlLattice *lattice);

/**
 * Dimension; 0 for a null handle.
 *
 * # Safety
 * `lattice` must be null or a live handle.
 */
size_t kl_lattice_dimension(const KlLattice *lattice);

/**
 * Text form of the basis.
 *
 * # Safety
 * `lattice` must be a live handle and `out` a valid pointer.
 */
KlStatus kl_lattice_to_text(const KlLattice *lattice, char **out);

/**
 * Membership of the integer vector `x` of length `len`.
 *
 * # Safety
 * `lattice` must be a live handle, `x` must point to `len` readable
 * `int64_t` values and `out` must be valid.
 */
KlStatus kl_lattice_contains(const KlLattice *lattice, const int64_t *x, size_t len, bool *out);

/**
 * Counts nonzero vectors of norm at most `cap`.
 *
 * # Safety
 * `lattice` must be a live handle and `out` a valid pointer.
 */
KlStatus kl_lattice_short_vectors(const KlLattice *lattice,
                                  uint64_t cap,
                                  size_t workers,
                                  KlShortVectors *out);

/**
 * Runs the certification pipeline on a code text. `cap` = 0 selects the
 * default cap; `format` is `"json"` or `"csv-summary"`.
 *
 * # Safety
 * `code_text` and `format` must be valid NUL-terminated strings and `out` a
 * valid pointer.
 */
KlStatus kl_certify(const char *code_text,
                    uint64_t seed,
                    uint64_t cap,
                    const char *format,
                    char **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
KlStatus kl_bounds_constants(KlBoundsConstants *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KISSLAT_H */
