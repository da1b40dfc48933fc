#ifndef DELTAINF_H
#define DELTAINF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DeltainfStatus {
  DELTAINF_STATUS_OK = 0,
  DELTAINF_STATUS_NULL_ARGUMENT = 1,
  DELTAINF_STATUS_INVALID_UTF8 = 2,
  DELTAINF_STATUS_PARSE = 3,
  DELTAINF_STATUS_NO_DELTA = 4,
  DELTAINF_STATUS_UNKNOWN_COMMAND = 5,
  DELTAINF_STATUS_INVALID_INPUT = 6,
  DELTAINF_STATUS_COMPUTATION = 7,
  DELTAINF_STATUS_PANIC = 8,
} DeltainfStatus;

/**
 * A parsed algebra. Only ever seen through a pointer.
 */
typedef struct DeltainfAlgebra DeltainfAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Owned by the
 * library and valid until the next failing call on the same thread.
 */
const char *deltainf_last_error(void);

/**
 * Parses an algebra definition.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum DeltainfStatus deltainf_algebra_parse(const char *text, struct DeltainfAlgebra **out);

/**
 * # Safety
 * `alg` is null or a handle not yet freed.
 */
void deltainf_algebra_free(struct DeltainfAlgebra *alg);

/**
 * # Safety
 * `alg` is a live handle and `out` a valid pointer.
 */
enum DeltainfStatus deltainf_algebra_dim(const struct DeltainfAlgebra *alg, size_t *out);

/**
 * Canonical text form of the algebra, to be released with [`deltainf_string_free`].
 *
 * # Safety
 * `alg` is a live handle and `out` a valid pointer.
 */
enum DeltainfStatus deltainf_algebra_serialize(const struct DeltainfAlgebra *alg, char **out);

/**
 * Number of violated structural identities; 0 means the algebra is valid.
 * The first violation, if any, becomes the thread's last error.
 *
 * # Safety
 * `alg` is a live handle and `violations` a valid pointer.
 */
enum DeltainfStatus deltainf_algebra_validate(const struct DeltainfAlgebra *alg,
                                              size_t *violations);

/**
 * Least `n ≤ cap` with `m_{n+1} = 0`, or −1 when every arity up to `cap + 1` is nonzero.
 *
 * # Safety
 * `alg` is a live handle and `order` a valid pointer.
 */
enum DeltainfStatus deltainf_associative_order(const struct DeltainfAlgebra *alg,
                                               size_t cap,
                                               int64_t *order);

/**
 * Runs a verification command (`validate`, `ainf`, `order`, `compat`,
 * `cohomology`, `bar`, `hochschild`, `all`) on algebra text with default
 * bounds. The report text goes to `report` and the process-style exit
 * code (0 all pass, 1 some check failed) to `exit_code`.
 *
 * # Safety
 * `command` and `text` are nul-terminated strings; `report` and
 * `exit_code` are valid pointers.
 */
enum DeltainfStatus deltainf_run(const char *command,
                                 const char *text,
                                 uint64_t seed,
                                 char **report,
                                 int32_t *exit_code);

/**
 * # Safety
 * `s` is null or a string returned by this library and not yet freed.
 */
void deltainf_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DELTAINF_H */
