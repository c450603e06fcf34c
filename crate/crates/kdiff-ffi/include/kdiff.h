#ifndef KDIFF_H
#define KDIFF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes.
typedef enum KdStatus {
  KD_STATUS_OK = 0,
  KD_STATUS_NULL_POINTER = 1,
  KD_STATUS_PARSE = 2,
  KD_STATUS_ENGINE = 3,
  KD_STATUS_BUFFER_TOO_SMALL = 4,
} KdStatus;

// Opaque parsed stratum.
typedef struct KdSpec KdSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a stratum such as "3;(-1,-1,-1,-1,-2)" into a new handle.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum KdStatus kd_spec_parse(const char *text, struct KdSpec **out);

// Releases a handle from `kd_spec_parse`. Null is ignored.
//
// # Safety
// `spec` must come from `kd_spec_parse` and not be used afterwards.
void kd_spec_free(struct KdSpec *spec);

// Dimension of the projectivized stratum.
//
// # Safety
// `spec` must be a live handle and `out` a valid pointer.
enum KdStatus kd_spec_dimension(const struct KdSpec *spec, int64_t *out);

// Writes the Euler characteristic as "p/q" into `buf`.
//
// # Safety
// `spec` must be a live handle and `buf` valid for `len` bytes.
enum KdStatus kd_euler_characteristic(const struct KdSpec *spec, char *buf, size_t len);

// Certifies a tuple "k:a1,...,a5" and returns the report as a JSON string
// to be released with `kd_string_free`.
//
// # Safety
// `tuple` must be a NUL-terminated string and `out` a valid pointer.
enum KdStatus kd_bq_certify(const char *tuple, bool cross_validate, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void kd_string_free(char *s);

// Message of the last failure on this thread, valid until the next call
// into the library.
const char *kd_last_error(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* KDIFF_H */
