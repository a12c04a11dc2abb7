#ifndef SMACOFSS_H
#define SMACOFSS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SmacofssStatus {
  SMACOFSS_STATUS_OK = 0,
  SMACOFSS_STATUS_NULL_POINTER = 1,
  SMACOFSS_STATUS_INVALID_ARGUMENT = 2,
  SMACOFSS_STATUS_DATA_ERROR = 3,
  SMACOFSS_STATUS_ENGINE_ERROR = 4,
  SMACOFSS_STATUS_PANIC = 5,
} SmacofssStatus;

// Opaque MDS data handle.
typedef struct SmacofssData SmacofssData;

// Opaque fit result handle.
typedef struct SmacofssResult SmacofssResult;

// Engine settings. `ties` is 1, 2 or 3 and only matters when `ordinal`.
typedef struct SmacofssConfig {
  size_t ndim;
  uint8_t ties;
  bool weighted;
  bool ordinal;
  size_t itmax;
  double eps;
} SmacofssConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *smacofss_last_error(void);

struct SmacofssConfig smacofss_config_default(void);

// Builds MDS data from row-major lower triangles (entries (2,1), (3,1),
// (3,2), …) of length `nobj (nobj - 1) / 2`. NaN marks a missing value.
// `weights` may be null for unit weights.
//
// # Safety
// `delta` (and `weights` when non-null) must point to
// `nobj (nobj - 1) / 2` readable doubles; `out` must be writable.
enum SmacofssStatus smacofss_data_from_triangle(size_t nobj,
                                                const double *delta,
                                                const double *weights,
                                                struct SmacofssData **out);

// Builds MDS data from its JSON serialization. The structure is validated.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum SmacofssStatus smacofss_data_from_json(const char *json, struct SmacofssData **out);

// Number of observed pairs, or 0 for a null handle.
//
// # Safety
// `data` must be null or a live handle.
size_t smacofss_data_ndat(const struct SmacofssData *data);

// # Safety
// `data` must be null or a live handle, which is invalid afterwards.
void smacofss_data_free(struct SmacofssData *data);

// Fits a configuration. `xinit` is null for the default start or a
// row-major `nobj × ndim` array.
//
// # Safety
// `data` must be a live handle, `config` readable, `xinit` null or
// `nobj * ndim` readable doubles, `out` writable.
enum SmacofssStatus smacofss_fit(const struct SmacofssData *data,
                                 const struct SmacofssConfig *config,
                                 const double *xinit,
                                 struct SmacofssResult **out);

// Stress of the result, NaN for a null handle.
//
// # Safety
// `result` must be null or a live handle.
double smacofss_result_stress(const struct SmacofssResult *result);

// # Safety
// `result` must be null or a live handle.
size_t smacofss_result_niter(const struct SmacofssResult *result);

// # Safety
// `result` must be null or a live handle.
size_t smacofss_result_nobj(const struct SmacofssResult *result);

// # Safety
// `result` must be null or a live handle.
size_t smacofss_result_ndim(const struct SmacofssResult *result);

// # Safety
// `result` must be null or a live handle.
size_t smacofss_result_ndat(const struct SmacofssResult *result);

// Copies the row-major `nobj × ndim` configuration into `buf`.
//
// # Safety
// `result` must be a live handle and `buf` writable for `len` doubles.
enum SmacofssStatus smacofss_result_conf(const struct SmacofssResult *result,
                                         double *buf,
                                         size_t len);

// Copies the `ndat` disparities, in data order, into `buf`.
//
// # Safety
// As for [`smacofss_result_conf`].
enum SmacofssStatus smacofss_result_dhat(const struct SmacofssResult *result,
                                         double *buf,
                                         size_t len);

// Copies the `ndat` configuration distances into `buf`.
//
// # Safety
// As for [`smacofss_result_conf`].
enum SmacofssStatus smacofss_result_confdist(const struct SmacofssResult *result,
                                             double *buf,
                                             size_t len);

// The result as JSON, in the same schema as the command-line `fit`.
// Free with [`smacofss_string_free`]. Null on failure.
//
// # Safety
// `result` must be null or a live handle.
char *smacofss_result_to_json(const struct SmacofssResult *result);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void smacofss_string_free(char *s);

// # Safety
// `result` must be null or a live handle, which is invalid afterwards.
void smacofss_result_free(struct SmacofssResult *result);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SMACOFSS_H */
