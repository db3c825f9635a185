#ifndef PLP_H
#define PLP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PlpDensityMode {
  PLP_DENSITY_MODE_EXACT = 0,
  PLP_DENSITY_MODE_RS = 1,
} PlpDensityMode;

/**
 * Result code of every fallible call.
 */
typedef enum PlpStatus {
  PLP_STATUS_OK = 0,
  PLP_STATUS_NULL_POINTER = 1,
  PLP_STATUS_INVALID_UTF8 = 2,
  PLP_STATUS_PARSE = 3,
  PLP_STATUS_DOMAIN = 4,
  PLP_STATUS_PRECISION = 5,
  PLP_STATUS_CONFIG = 6,
  PLP_STATUS_USAGE = 7,
  PLP_STATUS_GENERATION = 8,
  PLP_STATUS_NOT_ALL_COMPOSITE = 9,
  PLP_STATUS_PRECONDITION = 10,
  PLP_STATUS_BELOW_THRESHOLD = 11,
  PLP_STATUS_INVALID_SEQUENCE = 12,
  PLP_STATUS_INTERNAL = 13,
  PLP_STATUS_IO = 14,
  PLP_STATUS_PANIC = 15,
} PlpStatus;

typedef enum PlpVerdict {
  PLP_VERDICT_PASS = 0,
  PLP_VERDICT_FAIL = 1,
  PLP_VERDICT_INCONCLUSIVE = 2,
} PlpVerdict;

/**
 * Opaque validated PLP sequence.
 */
typedef struct PlpSequence PlpSequence;

/**
 * Opaque least-prime-factor tables.
 */
typedef struct PlpSieve PlpSieve;

typedef struct PlpThresholds {
  uint64_t n;
  uint64_t exact;
  uint64_t rs;
} PlpThresholds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a
 * successful one. The pointer stays valid until the next call into this
 * library from the same thread.
 */
const char *plp_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void plp_string_free(char *s);

/**
 * Builds sieve tables for `1..=limit`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PlpStatus plp_sieve_new(uint64_t limit, struct PlpSieve **out);

/**
 * # Safety
 * `sieve` must come from [`plp_sieve_new`] and not have been freed.
 */
void plp_sieve_free(struct PlpSieve *sieve);

/**
 * # Safety
 * `sieve` must be a live handle or null (returns 0).
 */
uint64_t plp_sieve_limit(const struct PlpSieve *sieve);

/**
 * # Safety
 * Pointers must be valid.
 */
enum PlpStatus plp_sieve_lpf(const struct PlpSieve *sieve, uint64_t n, uint64_t *out);

/**
 * `π(x)` for `x ≤ limit`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum PlpStatus plp_sieve_prime_count(const struct PlpSieve *sieve, uint64_t x, uint64_t *out);

/**
 * # Safety
 * Output pointers must be valid.
 */
enum PlpStatus plp_zeta(double s, double width, double *lo, double *hi);

/**
 * # Safety
 * Output pointers must be valid.
 */
enum PlpStatus plp_prime_zeta_mobius(double s, double width, double *lo, double *hi);

/**
 * # Safety
 * Pointers must be valid.
 */
enum PlpStatus plp_prime_zeta_direct(const struct PlpSieve *sieve,
                                     double s,
                                     uint64_t cutoff,
                                     double *lo,
                                     double *hi);

/**
 * Cached certified `P(s)` for integer `s ≥ 2`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum PlpStatus plp_p_constant(const struct PlpSieve *sieve, uint32_t s, double *lo, double *hi);

/**
 * Parses `{"terms": [...]}` and validates it as a PLP sequence.
 *
 * # Safety
 * `json_text` must be a NUL-terminated string; `out` must be valid.
 */
enum PlpStatus plp_sequence_from_json(const char *json_text, struct PlpSequence **out);

/**
 * # Safety
 * `terms` must point to `len` values (may be null when `len == 0`).
 */
enum PlpStatus plp_sequence_from_u64(const uint64_t *terms, size_t len, struct PlpSequence **out);

/**
 * # Safety
 * `seq` must come from this library and not have been freed.
 */
void plp_sequence_free(struct PlpSequence *seq);

/**
 * # Safety
 * `seq` must be a live handle or null (returns 0).
 */
size_t plp_sequence_len(const struct PlpSequence *seq);

/**
 * # Safety
 * Pointers must be valid.
 */
enum PlpStatus plp_sequence_to_json(const struct PlpSequence *seq, char **out_json);

/**
 * Generates `count` terms of the named family (`fermat`, `mersenne`, ...).
 * `sieve` may be null for families that do not need one.
 *
 * # Safety
 * `kind` must be a NUL-terminated string; other pointers valid or null as noted.
 */
enum PlpStatus plp_generate(const char *kind,
                            size_t count,
                            uint64_t seed,
                            uint64_t range_hint,
                            const struct PlpSieve *sieve,
                            struct PlpSequence **out);

/**
 * Validates an arbitrary term list given as JSON, writing the report and
 * whether it is a PLP sequence. An invalid sequence is not an error.
 *
 * # Safety
 * `json_text` must be a NUL-terminated string; `out_valid` may be null.
 */
enum PlpStatus plp_validate_json(const char *json_text, bool *out_valid, char **out_json);

/**
 * # Safety
 * Pointers must be valid; `out_verdict` may be null.
 */
enum PlpStatus plp_certify_reciprocal_bound(const struct PlpSequence *seq,
                                            const struct PlpSieve *sieve,
                                            enum PlpVerdict *out_verdict,
                                            char **out_json);

/**
 * # Safety
 * Pointers must be valid; `out_verdict` may be null.
 */
enum PlpStatus plp_decompose(const struct PlpSequence *seq,
                             const struct PlpSieve *sieve,
                             enum PlpVerdict *out_verdict,
                             char **out_json);

/**
 * # Safety
 * Pointers must be valid; `out_verdict` may be null.
 */
enum PlpStatus plp_certify_low_omega(const struct PlpSequence *seq,
                                     uint32_t s,
                                     const struct PlpSieve *sieve,
                                     enum PlpVerdict *out_verdict,
                                     char **out_json);

/**
 * # Safety
 * Pointers must be valid; `out_verdict` may be null.
 */
enum PlpStatus plp_certify_prime_witness(const struct PlpSequence *seq,
                                         uint64_t n,
                                         enum PlpDensityMode mode,
                                         const struct PlpSieve *sieve,
                                         enum PlpVerdict *out_verdict,
                                         char **out_json);

/**
 * # Safety
 * Pointers must be valid.
 */
enum PlpStatus plp_thresholds(const struct PlpSieve *sieve, uint64_t n, struct PlpThresholds *out);

/**
 * Largest composite PLP set in `[4, n]` (or the one with the largest
 * reciprocal sum when `by_sum` is set), as JSON.
 *
 * # Safety
 * Pointers must be valid.
 */
enum PlpStatus plp_oracle(const struct PlpSieve *sieve, uint64_t n, bool by_sum, char **out_json);

/**
 * Decimal text of term `index`, or null if out of range.
 *
 * # Safety
 * `seq` must be a live handle; free the result with [`plp_string_free`].
 */
char *plp_sequence_term(const struct PlpSequence *seq, size_t index);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLP_H */
