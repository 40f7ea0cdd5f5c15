#ifndef OTKIT_H
#define OTKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  OTK_OK = 0,
  OTK_ERR_NULL = 1,
  OTK_ERR_UTF8 = 2,
  OTK_ERR_PARSE = 3,
  OTK_ERR_LEVELS = 4,
  OTK_ERR_INVALID = 5,
  OTK_ERR_TOWER = 6,
  OTK_ERR_SUITE = 7,
  OTK_ERR_MISMATCH = 8,
  OTK_ERR_PANIC = 9,
} OtkStatus;

/**
 * A parsed term together with its number of levels.
 */
typedef struct OtkTerm OtkTerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none.  The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *otk_last_error(void);

/**
 * Parses `src` as a term over `levels` reflection levels (at least 3).
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a writable pointer.
 */
OtkStatus otk_term_parse(const char *src, uint32_t levels, OtkTerm **out);

/**
 * Releases a handle from `otk_term_parse`; null is ignored.
 *
 * # Safety
 * `t` must be null or a handle not yet freed.
 */
void otk_term_free(OtkTerm *t);

/**
 * Canonical printed form; release with `otk_string_free`.
 *
 * # Safety
 * `t` must be a live handle and `out` a writable pointer.
 */
OtkStatus otk_term_to_string(const OtkTerm *t, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void otk_string_free(char *s);

/**
 * Term length.
 *
 * # Safety
 * `t` must be a live handle and `out` a writable pointer.
 */
OtkStatus otk_term_length(const OtkTerm *t, size_t *out);

/**
 * Writes -1, 0 or 1 as `a` is below, equal to or above `b`.  Both
 * handles must have the same number of levels.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a writable pointer.
 */
OtkStatus otk_term_compare(const OtkTerm *a, const OtkTerm *b, int32_t *out);

/**
 * Writes whether the term is valid.
 *
 * # Safety
 * `t` must be a live handle and `out` a writable pointer.
 */
OtkStatus otk_term_is_valid(const OtkTerm *t, bool *out);

/**
 * Writes whether the term lies in slice `n`.
 *
 * # Safety
 * `t` must be a live handle and `out` a writable pointer.
 */
OtkStatus otk_term_in_slice(const OtkTerm *t, uint32_t n, bool *out);

/**
 * The tower of a collapsing term as an s-expression; release with
 * `otk_string_free`.
 *
 * # Safety
 * `t` must be a live handle and `out` a writable pointer.
 */
OtkStatus otk_term_tower(const OtkTerm *t, char **out);

/**
 * Runs a named property suite.  `count` and `max_len` of 0 pick the
 * suite's defaults.  Writes the number of cases run and failures found.
 *
 * # Safety
 * `name` must be a NUL-terminated string; the outputs writable pointers.
 */
OtkStatus otk_suite_run(const char *name,
                        uint64_t seed,
                        size_t count,
                        size_t max_len,
                        uint32_t levels,
                        size_t *cases,
                        size_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OTKIT_H */
