#ifndef HEEGAARD_H
#define HEEGAARD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HgStatus {
  HG_STATUS_OK = 0,
  HG_STATUS_NULL_POINTER = 1,
  HG_STATUS_INVALID_UTF8 = 2,
  HG_STATUS_PARSE = 3,
  HG_STATUS_INVALID_MANIFOLD = 4,
  HG_STATUS_INVALID_ARGUMENT = 5,
  HG_STATUS_TORSION_TOO_LARGE = 6,
  HG_STATUS_PANIC = 7,
} HgStatus;

typedef enum HgTheory {
  HG_THEORY_CHERN_SIMONS = 0,
  HG_THEORY_BF = 1,
} HgTheory;

/**
 * Opaque handle to validated gluing data.
 */
typedef struct HgManifold HgManifold;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a manifold description (explicit blocks or a construction).
 *
 * # Safety
 *
 * `json` must be NULL or a NUL-terminated string; `out` must be NULL or
 * writable.
 */
enum HgStatus hg_manifold_from_json(const char *json, struct HgManifold **out);

/**
 * The lens space `L(p, q)`.
 *
 * # Safety
 *
 * `out` must be NULL or writable.
 */
enum HgStatus hg_manifold_lens(int64_t p, int64_t q, struct HgManifold **out);

/**
 * Builds a manifold from four row-major `genus × genus` blocks.
 *
 * # Safety
 *
 * Each block pointer must be NULL or point to `genus * genus` readable
 * values; `out` must be NULL or writable.
 */
enum HgStatus hg_manifold_from_blocks(size_t genus,
                                      const int64_t *r,
                                      const int64_t *p,
                                      const int64_t *s,
                                      const int64_t *q,
                                      struct HgManifold **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 *
 * `m` must be NULL or a handle from this library that has not been freed.
 */
void hg_manifold_free(struct HgManifold *m);

/**
 * Genus of the splitting, or 0 for NULL.
 *
 * # Safety
 *
 * `m` must be NULL or a live handle.
 */
size_t hg_manifold_genus(const struct HgManifold *m);

/**
 * `{"free_rank":…,"invariant_factors":[…],"h2_rank":…}`.
 *
 * # Safety
 *
 * `m` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum HgStatus hg_homology_json(const struct HgManifold *m, char **out);

/**
 * Linking-form matrix of `"a/b"` strings.
 *
 * # Safety
 *
 * `m` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum HgStatus hg_linking_form_json(const struct HgManifold *m, char **out);

/**
 * Numerical value of a partition function, computed from its exact form.
 *
 * # Safety
 *
 * `m` must be NULL or a live handle; `re` and `im` must be NULL or writable.
 */
enum HgStatus hg_partition(const struct HgManifold *m,
                           enum HgTheory theory,
                           uint64_t level,
                           double *re,
                           double *im);

/**
 * Exact partition function: raw terms, reduced terms and value.
 *
 * # Safety
 *
 * `m` must be NULL or a live handle; `out` must be NULL or writable.
 */
enum HgStatus hg_partition_json(const struct HgManifold *m,
                                enum HgTheory theory,
                                uint64_t level,
                                char **out);

/**
 * Wilson-loop expectation value. Links are JSON link descriptions;
 * `link2_json` may be NULL for Chern–Simons and is required for BF.
 *
 * # Safety
 *
 * `m` must be NULL or a live handle; the link strings must be NULL or
 * NUL-terminated; `out` must be NULL or writable.
 */
enum HgStatus hg_wilson_json(const struct HgManifold *m,
                             enum HgTheory theory,
                             uint64_t level,
                             const char *link_json,
                             const char *link2_json,
                             int64_t mutual_linking,
                             char **out);

/**
 * Largest number of torsion terms a sum may visit (`|T|` for Chern–Simons,
 * `|T|²` for BF). Applies process-wide. Defaults to 1000000.
 */
void hg_set_max_torsion(uint64_t limit);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 *
 * `s` must be NULL or a string from this library that has not been freed.
 */
void hg_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or an empty string.
 * Valid until the next library call on the same thread.
 */
const char *hg_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEEGAARD_H */
