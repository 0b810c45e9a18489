#ifndef PADIC_VERTEX_H
#define PADIC_VERTEX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PvStatus {
  PV_STATUS_OK = 0,
  PV_STATUS_INVALID_ARGUMENT = 1,
  PV_STATUS_NULL_POINTER = 2,
  PV_STATUS_VERIFICATION_FAILED = 3,
  PV_STATUS_ARITHMETIC = 4,
  PV_STATUS_PANIC = 5,
} PvStatus;

/**
 * A computed `T_s(z)`.
 */
typedef struct PvTs PvTs;

/**
 * Exact vertex function coefficients `c_0, …, c_D`.
 */
typedef struct PvVertex PvVertex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pv_version(void);

/**
 * Message for the last failed call on this thread (empty after success).
 * The pointer stays valid until the next call into this library.
 */
const char *pv_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pv_string_free(char *s);

/**
 * Compute `T_s(z)` for `T*Gr(k, n)` with `ω = r/q`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum PvStatus pv_ts_compute(uint32_t k,
                            uint32_t n,
                            uint64_t r,
                            uint64_t q,
                            uint64_t p,
                            uint32_t s,
                            struct PvTs **out);

/**
 * # Safety
 * `ts` must come from [`pv_ts_compute`] and not have been freed.
 */
void pv_ts_free(struct PvTs *ts);

/**
 * Degree of `T_s` (`-1` for the zero polynomial).
 *
 * # Safety
 * `ts` must be a live handle and `out` valid.
 */
enum PvStatus pv_ts_degree(const struct PvTs *ts, int64_t *out);

/**
 * Normalizing sign `σ_s` with `signed = σ_s · unsigned`.
 *
 * # Safety
 * `ts` must be a live handle and `out` valid.
 */
enum PvStatus pv_ts_sign(const struct PvTs *ts, int32_t *out);

/**
 * Coefficient of `z^index` as a decimal string; `is_signed` selects the
 * normalized (`T_s(0) = 1`) convention. Free with [`pv_string_free`].
 *
 * # Safety
 * `ts` must be a live handle and `out` valid.
 */
enum PvStatus pv_ts_coeff_str(const struct PvTs *ts, size_t index, bool is_signed, char **out);

/**
 * Teichmüller lift of `u` modulo `p^s` as a decimal string.
 *
 * # Safety
 * `out` must be valid.
 */
enum PvStatus pv_teichmuller_lift(uint64_t u, uint64_t p, uint32_t s, char **out);

/**
 * Dwork congruence at level `s` in the signed convention. Returns `OK`
 * when it holds and `VERIFICATION_FAILED` otherwise. When `report_json`
 * is non-null it receives the JSON report.
 *
 * # Safety
 * `report_json` must be null or valid.
 */
enum PvStatus pv_dwork_check(uint32_t k,
                             uint32_t n,
                             uint64_t r,
                             uint64_t q,
                             uint64_t p,
                             uint32_t s,
                             char **report_json);

/**
 * Vertex function coefficients through `z^d_max` (closed form for
 * `k = 1`, fixed-point localization otherwise).
 *
 * # Safety
 * `out` must be valid.
 */
enum PvStatus pv_vertex_compute(uint32_t k,
                                uint32_t n,
                                uint64_t r,
                                uint64_t q,
                                size_t d_max,
                                struct PvVertex **out);

/**
 * Number of coefficients held.
 *
 * # Safety
 * `v` must be a live handle and `out` valid.
 */
enum PvStatus pv_vertex_len(const struct PvVertex *v, size_t *out);

/**
 * Coefficient `c_index` as `"num/den"` (or an integer string).
 *
 * # Safety
 * `v` must be a live handle and `out` valid.
 */
enum PvStatus pv_vertex_coeff_str(const struct PvVertex *v, size_t index, char **out);

/**
 * # Safety
 * `v` must come from [`pv_vertex_compute`] and not have been freed.
 */
void pv_vertex_free(struct PvVertex *v);

/**
 * Point count `N` and `M` on `y^q = x^{q-r}(1-x)^r(z0-x)^r` over `F_p`.
 * Returns `VERIFICATION_FAILED` if any of the count identities fails.
 *
 * # Safety
 * `points` and `m` must be valid.
 */
enum PvStatus pv_count_curve(uint64_t r,
                             uint64_t q,
                             uint64_t p,
                             uint64_t z0,
                             uint64_t *points,
                             uint64_t *m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADIC_VERTEX_H */
