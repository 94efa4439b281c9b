#ifndef SUBMAX_LIE_H
#define SUBMAX_LIE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SmlStatus {
  SML_STATUS_OK = 0,
  SML_STATUS_NULL_POINTER = 1,
  SML_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A search budget ran out before the answer was certain.
   */
  SML_STATUS_REFUSED = 3,
  SML_STATUS_INTERNAL = 4,
} SmlStatus;

typedef enum SmlStrategy {
  SML_STRATEGY_SEARCH = 0,
  SML_STRATEGY_REPLAY = 1,
} SmlStrategy;

/**
 * Opaque result of an LT-fiber computation.
 */
typedef struct SmlFiber SmlFiber;

/**
 * Opaque set of positive roots of A_n.
 */
typedef struct SmlRootSet SmlRootSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Owned by the
 * library and valid until the next call on the same thread.
 */
const char *sml_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sml_string_free(char *s);

/**
 * p-rank of the nilradical of a Borel subalgebra of type A_n.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SmlStatus sml_p_rank(uint32_t n, uint32_t *out);

/**
 * Parses a named set (`rad:k`, `odd`, `ev-low`, `ev-high`) or a root list
 * such as `"1-3,2-4"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` valid for writes.
 */
enum SmlStatus sml_root_set_new(uint32_t n, const char *spec, struct SmlRootSet **out);

/**
 * # Safety
 * `set` must come from [`sml_root_set_new`] and not be used afterwards.
 */
void sml_root_set_free(struct SmlRootSet *set);

/**
 * # Safety
 * `set` must be a live handle and `out` valid for writes.
 */
enum SmlStatus sml_root_set_len(const struct SmlRootSet *set, uintptr_t *out);

/**
 * # Safety
 * `set` must be a live handle and `out` valid for writes.
 */
enum SmlStatus sml_root_set_is_ideal(const struct SmlRootSet *set, bool *out);

/**
 * JSON array of roots; free with [`sml_string_free`].
 *
 * # Safety
 * `set` must be a live handle and `out` valid for writes.
 */
enum SmlStatus sml_root_set_to_json(const struct SmlRootSet *set, char **out);

/**
 * Looks for a permutation of `1..=n+1` sending every root of `a` to a
 * positive root of `b`. On success `*found` says whether one exists and, if
 * so, its images are written to `images[0..n+1]`.
 *
 * # Safety
 * Handles must be live; `found` must be valid for writes and `images` for
 * `images_len` writes.
 */
enum SmlStatus sml_weyl_conjugacy_search(const struct SmlRootSet *a,
                                         const struct SmlRootSet *b,
                                         bool *found,
                                         uint32_t *images,
                                         uintptr_t images_len);

/**
 * All elementary subalgebras of `u` over `F_p` with leading-term set `lt`
 * under the standard order. `budget` bounds the search nodes; 0 means the
 * library default. An incomplete answer is returned with status `Refused`
 * and still stored in `*out`.
 *
 * # Safety
 * `lt` must be a NUL-terminated string and `out` valid for writes.
 */
enum SmlStatus sml_lt_fiber(uint32_t n,
                            uint32_t p,
                            const char *lt,
                            enum SmlStrategy strategy,
                            uint64_t budget,
                            struct SmlFiber **out);

/**
 * # Safety
 * `fiber` must come from [`sml_lt_fiber`] and not be used afterwards.
 */
void sml_fiber_free(struct SmlFiber *fiber);

/**
 * # Safety
 * `fiber` must be a live handle and `out` valid for writes.
 */
enum SmlStatus sml_fiber_solution_count(const struct SmlFiber *fiber, uintptr_t *out);

/**
 * # Safety
 * `fiber` must be a live handle and `out` valid for writes.
 */
enum SmlStatus sml_fiber_is_complete(const struct SmlFiber *fiber, bool *out);

/**
 * Report in the same JSON shape as the command line; free with
 * [`sml_string_free`].
 *
 * # Safety
 * `fiber` must be a live handle and `out` valid for writes.
 */
enum SmlStatus sml_fiber_to_json(const struct SmlFiber *fiber, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBMAX_LIE_H */
