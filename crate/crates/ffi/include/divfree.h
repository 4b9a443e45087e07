#ifndef DIVFREE_H
#define DIVFREE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the nonzero values match the exit codes of the CLI where
 * they overlap.
 */
typedef enum DfStatus {
  DF_STATUS_OK = 0,
  /**
   * Null pointer or invalid UTF-8.
   */
  DF_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Descriptor, parse or tangency error.
   */
  DF_STATUS_VALIDATION = 2,
  /**
   * Internal consistency check failed.
   */
  DF_STATUS_INCONSISTENT = 3,
  DF_STATUS_RESOURCE_CAP = 4,
  DF_STATUS_PANIC = 5,
} DfStatus;

/**
 * Opaque coordinate ring of a catalog variety.
 */
typedef struct DfRing DfRing;

/**
 * Opaque certified volume form.
 */
typedef struct DfVolume DfVolume;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; valid until the next call.
 */
const char *df_last_error(void);

/**
 * Version string of the library, statically allocated.
 */
const char *df_version(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void df_string_free(char *s);

/**
 * Builds a ring from a JSON descriptor
 * `{"kind", "n", "p_coefficients", "lines"}`.
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string; `out` must be writable.
 */
enum DfStatus df_ring_new(const char *descriptor, struct DfRing **out);

/**
 * # Safety
 * `ring` must come from [`df_ring_new`] or be null.
 */
void df_ring_free(struct DfRing *ring);

/**
 * Truncated cohomology as a JSON report with field `"betti"`.
 *
 * # Safety
 * `ring` must be a live handle; `out` must be writable.
 */
enum DfStatus df_cohomology(const struct DfRing *ring,
                            int64_t max_degree,
                            int32_t neg_cap,
                            int64_t slack,
                            char **out);

/**
 * # Safety
 * `ring` must be a live handle; `out` must be writable.
 */
enum DfStatus df_volume_new(const struct DfRing *ring, struct DfVolume **out);

/**
 * # Safety
 * `vol` must come from [`df_volume_new`] or be null.
 */
void df_volume_free(struct DfVolume *vol);

/**
 * Divergence of a field given as `var=expr;var=expr`, as JSON
 * `{"divergence": "..."}`.
 *
 * # Safety
 * `vol` must be a live handle, `field` NUL-terminated, `out` writable.
 */
enum DfStatus df_divergence(const struct DfVolume *vol, const char *field, char **out);

/**
 * Both sides of the quotient formula on a surface at default truncations.
 *
 * # Safety
 * `vol` must be a live handle; `out` must be writable.
 */
enum DfStatus df_surface_theorem(const struct DfVolume *vol, char **out);

/**
 * Spanning set of Λ²(sl_n) with rank and verdict, as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum DfStatus df_sl_span(uint32_t n, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIVFREE_H */
