#ifndef ANOMALIA_H
#define ANOMALIA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stdint.h>

typedef enum AnomaliaStatus {
  ANOMALIA_STATUS_OK = 0,
  ANOMALIA_STATUS_INVALID_INPUT = 1,
  ANOMALIA_STATUS_RESOURCE_LIMIT = 2,
  ANOMALIA_STATUS_DEGENERATE = 3,
  ANOMALIA_STATUS_MODULARITY_FAILURE = 4,
  ANOMALIA_STATUS_INTERNAL_ERROR = 5,
  ANOMALIA_STATUS_NULL_POINTER = 6,
  ANOMALIA_STATUS_PANIC = 7,
} AnomaliaStatus;

/**
 * A Lagrangian extension of the dual of `Z_n`.
 */
typedef struct AnomaliaExtension AnomaliaExtension;

/**
 * The anomaly report of a cyclic permutation orbifold.
 */
typedef struct AnomaliaReport AnomaliaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *anomalia_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed at most once.
 */
void anomalia_string_free(char *s);

/**
 * Whether the `Z_n` orbifold of a holomorphic theory of central charge `c`
 * is non-anomalous. `c` must be a positive multiple of 8.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_is_non_anomalous(uint64_t c, uint64_t n, bool *out);

/**
 * # Safety
 * `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_orbifold_report(uint64_t c, uint64_t n, struct AnomaliaReport **out);

/**
 * # Safety
 * `r` must be null or a live report; `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_report_anomaly_index(const struct AnomaliaReport *r, uint64_t *out);

/**
 * # Safety
 * `r` must be null or a live report; `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_report_is_anomalous(const struct AnomaliaReport *r, bool *out);

/**
 * Copy of the report's representation category as an extension handle.
 *
 * # Safety
 * `r` must be null or a live report; `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_report_extension(const struct AnomaliaReport *r,
                                              struct AnomaliaExtension **out);

/**
 * The report as JSON; free with [`anomalia_string_free`].
 *
 * # Safety
 * `r` must be null or a live report; `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_report_to_json(const struct AnomaliaReport *r, char **out);

/**
 * # Safety
 * `r` must be null or a report from this library, freed at most once.
 */
void anomalia_report_free(struct AnomaliaReport *r);

/**
 * # Safety
 * `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_extension_standard(uint64_t n, struct AnomaliaExtension **out);

/**
 * Twisted double of `Z_n` with class `j` (taken mod `n`).
 *
 * # Safety
 * `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_extension_twisted_double(uint64_t n,
                                                      int64_t j,
                                                      struct AnomaliaExtension **out);

/**
 * Parses extension JSON, or an orbifold report JSON (its extension is used).
 *
 * # Safety
 * `json` must be null or a nul-terminated string; `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_extension_from_json(const char *json, struct AnomaliaExtension **out);

/**
 * # Safety
 * `e` must be null or a live extension; `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_extension_to_json(const struct AnomaliaExtension *e, char **out);

/**
 * The cycle length `n`.
 *
 * # Safety
 * `e` must be null or a live extension; `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_extension_cycle(const struct AnomaliaExtension *e, uint64_t *out);

/**
 * # Safety
 * `e` must be null or a live extension; `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_extension_anomaly_index(const struct AnomaliaExtension *e,
                                                     uint64_t *out);

/**
 * # Safety
 * `a`, `b` must be null or live extensions; `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_extension_boxplus(const struct AnomaliaExtension *a,
                                               const struct AnomaliaExtension *b,
                                               struct AnomaliaExtension **out);

/**
 * Whether an isometry carrying `iota` to `iota` exists.
 *
 * # Safety
 * `a`, `b` must be null or live extensions; `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_extension_isomorphic(const struct AnomaliaExtension *a,
                                                  const struct AnomaliaExtension *b,
                                                  bool *out);

/**
 * Whether the extension is isomorphic to the standard one.
 *
 * # Safety
 * `e` must be null or a live extension; `out` must be null or writable.
 */
enum AnomaliaStatus anomalia_extension_trivializable(const struct AnomaliaExtension *e, bool *out);

/**
 * # Safety
 * `e` must be null or an extension from this library, freed at most once.
 */
void anomalia_extension_free(struct AnomaliaExtension *e);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANOMALIA_H */
