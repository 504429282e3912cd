#ifndef CFM_H
#define CFM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum CfmStatus {
  CFM_STATUS_OK = 0,
  CFM_STATUS_NULL_POINTER = 1,
  CFM_STATUS_INVALID_UTF8 = 2,
  CFM_STATUS_PARSE = 3,
  CFM_STATUS_INVALID_EXPRESSION = 4,
  CFM_STATUS_MEMBERSHIP = 5,
  CFM_STATUS_NUMERIC = 6,
  CFM_STATUS_SHAPE = 7,
  CFM_STATUS_FORMAT = 8,
  CFM_STATUS_BUFFER_TOO_SMALL = 9,
  CFM_STATUS_OVERFLOW = 10,
  CFM_STATUS_INTERNAL = 11,
} CfmStatus;

typedef enum CfmField {
  CFM_FIELD_REAL = 1,
  CFM_FIELD_COMPLEX = 2,
  CFM_FIELD_QUATERNION = 4,
} CfmField;

/**
 * Opaque canonical form.
 */
typedef struct CfmForm CfmForm;

/**
 * Opaque matrix over R, C or H.
 */
typedef struct CfmMatrix CfmMatrix;

/**
 * Zero and orthogonality tolerances; pass `NULL` for the defaults.
 */
typedef struct CfmTolerance {
  double eps_zero;
  double eps_orth;
} CfmTolerance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or `NULL`. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *cfm_last_error(void);

/**
 * Releases a string returned by the library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cfm_string_free(char *s);

/**
 * Parses a DSL expression or `preset:` invocation.
 *
 * # Safety
 * `expr` must be a nul-terminated string and `out` a valid pointer.
 */
enum CfmStatus cfm_form_parse(const char *expr, struct CfmForm **out);

/**
 * # Safety
 * `form` must come from `cfm_form_parse` and not have been freed.
 */
void cfm_form_free(struct CfmForm *form);

/**
 * The form printed in the DSL; free with `cfm_string_free`.
 *
 * # Safety
 * `form` must be a live handle.
 */
char *cfm_form_to_string(const struct CfmForm *form);

/**
 * # Safety
 * `form` must be a live handle and `rows`, `cols` valid pointers.
 */
enum CfmStatus cfm_form_shape(const struct CfmForm *form, size_t *rows, size_t *cols);

/**
 * Dimension over F of the manifold of members.
 *
 * # Safety
 * `form` must be a live handle and `out` a valid pointer.
 */
enum CfmStatus cfm_form_dimension(const struct CfmForm *form, size_t *out);

/**
 * # Safety
 * `form` must be a live handle and `out` a valid pointer.
 */
enum CfmStatus cfm_form_cell_count(const struct CfmForm *form, uint64_t *out);

/**
 * # Safety
 * `form` must be a live handle and `out` a valid pointer.
 */
enum CfmStatus cfm_form_euler(const struct CfmForm *form, enum CfmField field, int64_t *out);

/**
 * Writes the Poincaré polynomial coefficients (constant term first) into
 * `coeffs`. `len` receives the number of coefficients; if it exceeds
 * `capacity` nothing is written and `CFM_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `coeffs` must hold `capacity` values (it may be `NULL` when `capacity` is 0).
 */
enum CfmStatus cfm_form_poincare(const struct CfmForm *form,
                                 enum CfmField field,
                                 int64_t *coeffs,
                                 size_t capacity,
                                 size_t *len);

/**
 * Builds a matrix from `rows·cols·d` doubles in row-major order, where `d`
 * is the real dimension of `field` and each entry lists its real components.
 *
 * # Safety
 * `data` must hold `rows·cols·d` doubles and `out` be a valid pointer.
 */
enum CfmStatus cfm_matrix_new(enum CfmField field,
                              size_t rows,
                              size_t cols,
                              const double *data,
                              struct CfmMatrix **out);

/**
 * Parses the JSON matrix format used by the `cfm` command.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum CfmStatus cfm_matrix_from_json(const char *json, struct CfmMatrix **out);

/**
 * # Safety
 * `m` must be a live handle.
 */
char *cfm_matrix_to_json(const struct CfmMatrix *m);

/**
 * # Safety
 * `m` must come from this library and not have been freed.
 */
void cfm_matrix_free(struct CfmMatrix *m);

/**
 * # Safety
 * `m` must be a live handle and the out pointers valid.
 */
enum CfmStatus cfm_matrix_shape(const struct CfmMatrix *m,
                                size_t *rows,
                                size_t *cols,
                                enum CfmField *field);

/**
 * Copies the real components of entry `(row, col)` (0-based) into `parts`,
 * which must hold the field's real dimension of doubles.
 *
 * # Safety
 * `m` must be a live handle and `parts` large enough.
 */
enum CfmStatus cfm_matrix_get(const struct CfmMatrix *m, size_t row, size_t col, double *parts);

/**
 * Seeded member of the form.
 *
 * # Safety
 * `form` must be a live handle, `tol` valid or `NULL`, and `out` a valid pointer.
 */
enum CfmStatus cfm_sample(const struct CfmForm *form,
                          enum CfmField field,
                          uint64_t seed,
                          const struct CfmTolerance *tol,
                          struct CfmMatrix **out);

/**
 * Membership check. Returns `CFM_STATUS_OK` when the check ran, with the
 * verdict in `passed`; `report` (if not `NULL`) receives the JSON report,
 * to be freed with `cfm_string_free`.
 *
 * # Safety
 * Handles must be live; `passed` must be valid; `report` may be `NULL`.
 */
enum CfmStatus cfm_check(const struct CfmForm *form,
                         const struct CfmMatrix *m,
                         const struct CfmTolerance *tol,
                         bool *passed,
                         char **report);

/**
 * Symbol of the cell containing the member `m`; free with `cfm_string_free`.
 *
 * # Safety
 * Handles must be live and `out` a valid pointer.
 */
enum CfmStatus cfm_cell_of(const struct CfmForm *form,
                           const struct CfmMatrix *m,
                           const struct CfmTolerance *tol,
                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CFM_H */
