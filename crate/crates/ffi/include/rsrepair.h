#ifndef RSREPAIR_H
#define RSREPAIR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. Library failures map one to one onto
 * the library's error names.
 */
typedef enum RsrStatus {
  RSR_STATUS_OK = 0,
  RSR_STATUS_NULL_POINTER,
  RSR_STATUS_INVALID_UTF8,
  RSR_STATUS_BUFFER_TOO_SMALL,
  RSR_STATUS_PANIC,
  RSR_STATUS_NON_IRREDUCIBLE_MODULUS,
  RSR_STATUS_DEGREE_NOT_DIVIDING,
  RSR_STATUS_NO_DEFAULT_MODULUS,
  RSR_STATUS_ELEMENT_OUT_OF_RANGE,
  RSR_STATUS_SINGULAR_GRAM,
  RSR_STATUS_NOT_IN_SPAN,
  RSR_STATUS_DEPENDENT_BASIS,
  RSR_STATUS_DUPLICATE_POINT,
  RSR_STATUS_ALPHA_NOT_IN_S,
  RSR_STATUS_ALPHA_STAR_IN_S,
  RSR_STATUS_MESSAGE_DEGREE_TOO_HIGH,
  RSR_STATUS_INVALID_DIMENSIONS,
  RSR_STATUS_ZERO_MULTIPLIER,
  RSR_STATUS_LENGTH_MISMATCH,
  RSR_STATUS_TOO_LARGE_TO_ENUMERATE,
  RSR_STATUS_DEGREE_TOO_HIGH,
  RSR_STATUS_RANK_DEFICIENT_AT_STAR,
  RSR_STATUS_INVALID_SCHEME,
  RSR_STATUS_POINT_NOT_IN_CODE,
  RSR_STATUS_NOT_A_DUAL_CODEWORD,
  RSR_STATUS_K_TOO_LARGE,
  RSR_STATUS_A_MUST_BE_WHOLE_FIELD,
  RSR_STATUS_ODD_EXTENSION,
  RSR_STATUS_N_TOO_LARGE,
  RSR_STATUS_K_EQUALS_N,
  RSR_STATUS_UNKNOWN_CONSTRUCTION,
  RSR_STATUS_LOCALITY_TOO_SMALL,
  RSR_STATUS_SEARCH_SPACE_TOO_LARGE,
  RSR_STATUS_NO_VALID_TUPLE,
  RSR_STATUS_WRONG_CODE,
  RSR_STATUS_PARSE,
  RSR_STATUS_IO,
} RsrStatus;

/**
 * A validated repair scheme together with its code.
 */
typedef struct RsrScheme RsrScheme;

/**
 * A field tower GF(2^m) over GF(2^d).
 */
typedef struct RsrTower RsrTower;

/**
 * Construction parameters; zero means "not given".
 */
typedef struct RsrBuildParams {
  uint32_t m;
  uint32_t d;
  uint32_t modulus;
  size_t n;
  size_t k;
} RsrBuildParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Release it
 * with [`rsr_string_free`].
 */
char *rsr_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void rsr_string_free(char *s);

/**
 * Creates GF(2^m) over GF(2^d). `modulus` 0 selects the built-in one.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum RsrStatus rsr_tower_new(uint32_t m, uint32_t d, uint32_t modulus, struct RsrTower **out);

/**
 * # Safety
 * `tower` must be NULL or a handle from [`rsr_tower_new`], not yet freed.
 */
void rsr_tower_free(struct RsrTower *tower);

/**
 * `a * b` in the tower's field.
 *
 * # Safety
 * `tower` must be a live handle and `out` valid for writes.
 */
enum RsrStatus rsr_tower_mul(const struct RsrTower *tower, uint16_t a, uint16_t b, uint16_t *out);

/**
 * Trace of `x` down to the subfield.
 *
 * # Safety
 * `tower` must be a live handle and `out` valid for writes.
 */
enum RsrStatus rsr_tower_trace(const struct RsrTower *tower, uint16_t x, uint16_t *out);

/**
 * Builds a named construction (`trace`, `two_coset`, `naive`,
 * `hdfs14_10`). `params` may be NULL for `hdfs14_10`.
 *
 * # Safety
 * `construction` must be a NUL-terminated string, `params` NULL or valid,
 * and `out` valid for writes.
 */
enum RsrStatus rsr_scheme_build(const char *construction,
                                const struct RsrBuildParams *params,
                                struct RsrScheme **out);

/**
 * Loads and validates a scheme file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` valid for writes.
 */
enum RsrStatus rsr_scheme_load(const char *path, struct RsrScheme **out);

/**
 * # Safety
 * `scheme` must be a live handle and `path` a NUL-terminated string.
 */
enum RsrStatus rsr_scheme_save(const struct RsrScheme *scheme, const char *path);

/**
 * # Safety
 * `scheme` must be NULL or a live handle, not yet freed.
 */
void rsr_scheme_free(struct RsrScheme *scheme);

/**
 * Code length `n`, dimension `k`, and tower degrees `m`, `d`. Any output
 * pointer may be NULL.
 *
 * # Safety
 * `scheme` must be a live handle; non-NULL outputs must be valid for writes.
 */
enum RsrStatus rsr_scheme_params(const struct RsrScheme *scheme,
                                 size_t *n,
                                 size_t *k,
                                 uint32_t *m,
                                 uint32_t *d);

/**
 * Validation report as JSON. Release it with [`rsr_string_free`].
 *
 * # Safety
 * `scheme` must be a live handle and `out` valid for writes.
 */
enum RsrStatus rsr_scheme_report_json(const struct RsrScheme *scheme, char **out);

/**
 * Bits downloaded to repair position `star`.
 *
 * # Safety
 * `scheme` must be a live handle and `out` valid for writes.
 */
enum RsrStatus rsr_scheme_bandwidth_bits(const struct RsrScheme *scheme, size_t star, size_t *out);

/**
 * Encodes `message` (k coefficients, lowest degree first) into
 * `codeword`, which must hold at least n symbols.
 *
 * # Safety
 * `message` must hold `message_len` symbols and `codeword` `codeword_len`.
 */
enum RsrStatus rsr_scheme_encode(const struct RsrScheme *scheme,
                                 const uint16_t *message,
                                 size_t message_len,
                                 uint16_t *codeword,
                                 size_t codeword_len);

/**
 * Writes a random codeword determined by `seed`.
 *
 * # Safety
 * `codeword` must hold `codeword_len` symbols.
 */
enum RsrStatus rsr_scheme_random_codeword(const struct RsrScheme *scheme,
                                          uint64_t seed,
                                          uint16_t *codeword,
                                          size_t codeword_len);

/**
 * Rebuilds `codeword[star]` from trace queries to the other positions.
 * The value stored at `star` is never read. `bits` may be NULL.
 *
 * # Safety
 * `codeword` must hold `codeword_len` symbols; `symbol` must be valid for
 * writes and `bits` NULL or valid for writes.
 */
enum RsrStatus rsr_scheme_repair(const struct RsrScheme *scheme,
                                 const uint16_t *codeword,
                                 size_t codeword_len,
                                 size_t star,
                                 uint16_t *symbol,
                                 size_t *bits);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RSREPAIR_H */
