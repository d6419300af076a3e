#ifndef TORIX_H
#define TORIX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TorixStatus {
  TORIX_STATUS_OK = 0,
  TORIX_STATUS_NULL_POINTER = 1,
  TORIX_STATUS_INVALID_UTF8 = 2,
  TORIX_STATUS_PARSE_ERROR = 3,
  TORIX_STATUS_INVALID_FAN = 4,
  TORIX_STATUS_DOMAIN_ERROR = 5,
  TORIX_STATUS_CAP_EXCEEDED = 6,
  TORIX_STATUS_OUT_OF_RANGE = 7,
  TORIX_STATUS_PANIC = 8,
} TorixStatus;

/**
 * A validated fan.
 */
typedef struct TorixFan TorixFan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates a fan given as JSON text.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` valid for a
 * pointer write. On success `*out` receives a handle for [`torix_fan_free`].
 */
enum TorixStatus torix_fan_from_json(const char *json, bool strict, struct TorixFan **out);

/**
 * # Safety
 * `fan` must be null or a handle from [`torix_fan_from_json`] that has not
 * been freed.
 */
void torix_fan_free(struct TorixFan *fan);

/**
 * Rank of the lattice, or 0 for a null handle.
 *
 * # Safety
 * `fan` must be null or a live handle.
 */
size_t torix_fan_rank(const struct TorixFan *fan);

/**
 * Number of rays, or 0 for a null handle.
 *
 * # Safety
 * `fan` must be null or a live handle.
 */
size_t torix_fan_ray_count(const struct TorixFan *fan);

/**
 * Free rank of the class group.
 *
 * # Safety
 * `fan` must be a live handle and `out` valid for a write.
 */
enum TorixStatus torix_class_group_rank(const struct TorixFan *fan, size_t *out);

/**
 * Number of invariant factors of the torsion part of the class group.
 *
 * # Safety
 * `fan` must be a live handle and `out` valid for a write.
 */
enum TorixStatus torix_class_group_torsion_len(const struct TorixFan *fan, size_t *out);

/**
 * The `index`-th invariant factor. Factors too large for 64 bits are
 * reported as `TORIX_STATUS_OUT_OF_RANGE`; the JSON report has them exactly.
 *
 * # Safety
 * `fan` must be a live handle and `out` valid for a write.
 */
enum TorixStatus torix_class_group_torsion(const struct TorixFan *fan, size_t index, uint64_t *out);

/**
 * Class group report as JSON.
 *
 * # Safety
 * `fan` must be a live handle and `out` valid for a pointer write.
 */
enum TorixStatus torix_class_group_json(const struct TorixFan *fan, char **out);

/**
 * Decomposition of `F^e_* O` as JSON. A `cap` of 0 selects the default.
 *
 * # Safety
 * `fan` must be a live handle and `out` valid for a pointer write.
 */
enum TorixStatus torix_frobenius_json(const struct TorixFan *fan,
                                      uint64_t p,
                                      uint32_t e,
                                      uint64_t cap,
                                      char **out);

/**
 * Runs the command line with `argv[0..argc]` as arguments (without the
 * program name) and returns its exit code. Standard output is stored in
 * `*out_stdout`; standard error becomes the last error message.
 *
 * # Safety
 * `argv` must point to `argc` valid NUL-terminated strings and
 * `out_stdout` must be valid for a pointer write.
 */
int torix_run(int argc, const char *const *argv, char **out_stdout);

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next torix call on the same thread.
 */
const char *torix_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void torix_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORIX_H */
