#ifndef HILBERT_H
#define HILBERT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HilbStatus {
  HILB_STATUS_OK = 0,
  HILB_STATUS_NULL_POINTER = 1,
  HILB_STATUS_INVALID_UTF8 = 2,
  /**
   * Arguments violate the operation's contract (bad partition literal,
   * partitions of different size, out-of-range index).
   */
  HILB_STATUS_USAGE = 3,
  /**
   * Unknown surface, invalid parameters, failed validation, missing
   * Hodge data, unreadable catalog.
   */
  HILB_STATUS_DATA = 4,
  HILB_STATUS_PANIC = 5,
} HilbStatus;

/**
 * Opaque surface catalog.
 */
typedef struct HilbCatalog HilbCatalog;

/**
 * Opaque base surface.
 */
typedef struct HilbSurface HilbSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string; do not free.
 */
const char *hilb_version(void);

/**
 * Message for the most recent failure on this thread (empty after a
 * success). Valid until the next call into the library on this thread.
 */
const char *hilb_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void hilb_string_free(char *s);

/**
 * The built-in catalog.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HilbStatus hilb_catalog_builtin(struct HilbCatalog **out);

/**
 * Loads a catalog file.
 *
 * # Safety
 * `path` must be a NUL-terminated string, `out` a valid pointer.
 */
enum HilbStatus hilb_catalog_open(const char *path, struct HilbCatalog **out);

/**
 * # Safety
 * `catalog` must come from this library and not have been freed.
 */
void hilb_catalog_free(struct HilbCatalog *catalog);

/**
 * Instantiates catalog row `name`; `params` is `"g=2"`-style or null.
 *
 * # Safety
 * Pointers must be valid; `params` may be null.
 */
enum HilbStatus hilb_catalog_lookup(const struct HilbCatalog *catalog,
                                    const char *name,
                                    const char *params_literal,
                                    struct HilbSurface **out);

/**
 * A generic surface with the given Betti numbers (`χ = 2b0 − 2b1 + b2`).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HilbStatus hilb_surface_synthetic(uint32_t b0,
                                       uint32_t b1,
                                       uint32_t b2,
                                       struct HilbSurface **out);

/**
 * Parses a surface record in catalog syntax (TOML) and validates it.
 *
 * # Safety
 * `toml` must be a NUL-terminated string, `out` a valid pointer.
 */
enum HilbStatus hilb_surface_from_toml(const char *toml, struct HilbSurface **out);

/**
 * Switches `surface` to Kummer mode (parts stand for `Kum^{n+1}(A)`).
 * Fails unless the surface has the invariants of an abelian surface.
 *
 * # Safety
 * `surface` must be a live handle.
 */
enum HilbStatus hilb_surface_set_kummer(struct HilbSurface *surface);

/**
 * # Safety
 * `surface` must come from this library and not have been freed.
 */
void hilb_surface_free(struct HilbSurface *surface);

/**
 * The surface record as JSON.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HilbStatus hilb_surface_json(const struct HilbSurface *surface, char **out);

/**
 * `χ(S^[a])` as a decimal string.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HilbStatus hilb_euler_char(const struct HilbSurface *surface,
                                const char *partition_literal,
                                char **out);

/**
 * Betti numbers of `S^[a]` as JSON: `{"coefficients": ["1", "0", …]}`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HilbStatus hilb_poincare_json(const struct HilbSurface *surface,
                                   const char *partition_literal,
                                   char **out);

/**
 * `h^{p,0}(S^[a])` as a decimal string.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HilbStatus hilb_hodge_p0(const struct HilbSurface *surface,
                              const char *partition_literal,
                              uint32_t p,
                              char **out);

/**
 * The verdict for `S^[a]` vs `S^[b]` as JSON.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HilbStatus hilb_decide_json(const struct HilbSurface *surface,
                                 const char *a_literal,
                                 const char *b_literal,
                                 char **out);

/**
 * Rendered automorphism-group shape, e.g. `"Aut(S^[2])^2 ⋊ S_2"`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HilbStatus hilb_aut_shape(const char *partition_literal, char **out);

/**
 * `p_k(n)`, the number of k-coloured partitions of `n` (any integer `k`),
 * as a decimal string.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HilbStatus hilb_colored_count(int64_t k, uint32_t n, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HILBERT_H */
