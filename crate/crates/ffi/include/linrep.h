#ifndef LINREP_H
#define LINREP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LinrepStatus {
  LINREP_STATUS_OK = 0,
  LINREP_STATUS_NULL_POINTER = 1,
  LINREP_STATUS_INVALID_ARGUMENT = 2,
  LINREP_STATUS_PARSE = 3,
  LINREP_STATUS_SINGULAR = 4,
  LINREP_STATUS_BUDGET_EXCEEDED = 5,
  LINREP_STATUS_PANIC = 6,
} LinrepStatus;

// Outcome of a randomized equivalence test.
typedef enum LinrepVerdict {
  LINREP_VERDICT_CONSISTENT = 0,
  LINREP_VERDICT_COUNTEREXAMPLE = 1,
  LINREP_VERDICT_NO_COMMON_DOMAIN = 2,
} LinrepVerdict;

typedef struct LinrepExpr LinrepExpr;

typedef struct LinrepField LinrepField;

typedef struct LinrepMatrix LinrepMatrix;

typedef struct LinrepRepresentation LinrepRepresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. Valid until the
// next failing call on the same thread; do not free.
const char *linrep_last_error(void);

// # Safety
// `s` is NULL or a string returned by this library and not yet freed.
void linrep_string_free(char *s);

// `GF(p^deg)` with the default modulus.
//
// # Safety
// `out` is writable.
enum LinrepStatus linrep_field_new(uint32_t p, uint32_t deg, struct LinrepField **out);

// # Safety
// `field` is a live field handle and `out` is writable.
enum LinrepStatus linrep_field_order(const struct LinrepField *field, uint32_t *out);

// # Safety
// `field` is NULL or a handle from `linrep_field_new` not yet freed.
void linrep_field_free(struct LinrepField *field);

// Copies `rows * cols` row-major element codes from `data`.
//
// # Safety
// `field` is live, `data` holds `rows * cols` readable values and `out`
// is writable.
enum LinrepStatus linrep_matrix_new(const struct LinrepField *field,
                                    size_t rows,
                                    size_t cols,
                                    const uint32_t *data,
                                    struct LinrepMatrix **out);

// # Safety
// `m` is live; `rows` and `cols` are writable.
enum LinrepStatus linrep_matrix_dims(const struct LinrepMatrix *m, size_t *rows, size_t *cols);

// Writes the row-major element codes into `buf`, which holds `len` values.
//
// # Safety
// `m` is live and `buf` has room for `len` values.
enum LinrepStatus linrep_matrix_data(const struct LinrepMatrix *m, uint32_t *buf, size_t len);

// # Safety
// `m` is live and `out` is writable.
enum LinrepStatus linrep_matrix_rank(const struct LinrepMatrix *m, size_t *out);

// `LINREP_STATUS_SINGULAR` when `m` has no inverse.
//
// # Safety
// `m` is live and `out` is writable.
enum LinrepStatus linrep_matrix_inverse(const struct LinrepMatrix *m, struct LinrepMatrix **out);

// Invertible matrix at rank distance `n - rank(m)` from square `m`.
//
// # Safety
// `m` is live and `out` is writable.
enum LinrepStatus linrep_matrix_repair(const struct LinrepMatrix *m, struct LinrepMatrix **out);

// # Safety
// `m` is NULL or a live matrix handle.
void linrep_matrix_free(struct LinrepMatrix *m);

// Representation from its JSON file form.
//
// # Safety
// `json` is a NUL-terminated string and `out` is writable.
enum LinrepStatus linrep_rep_from_json(const char *json, struct LinrepRepresentation **out);

// Member `k` of the family described by a JSON descriptor.
//
// # Safety
// `descriptor` is a NUL-terminated string, `field` is live and `out` is
// writable.
enum LinrepStatus linrep_rep_family(const char *descriptor,
                                    const struct LinrepField *field,
                                    size_t k,
                                    struct LinrepRepresentation **out);

// # Safety
// `rep` is live and `out` is writable.
enum LinrepStatus linrep_rep_dim(const struct LinrepRepresentation *rep, size_t *out);

// Rank of the image of a group-algebra element and the dimension it is
// normalized by.
//
// # Safety
// `rep` is live, `element` is a NUL-terminated string, and `rank` and `n`
// are writable.
enum LinrepStatus linrep_rep_normalized_rank(const struct LinrepRepresentation *rep,
                                             const char *element,
                                             size_t *rank,
                                             size_t *n);

// # Safety
// `rep` is NULL or a live representation handle.
void linrep_rep_free(struct LinrepRepresentation *rep);

// Sets `valid` to whether the JSON witness passes every condition;
// [`linrep_last_error`] is not touched when it merely fails a check.
//
// # Safety
// `rep` is live, `witness_json` is a NUL-terminated string and `valid` is
// writable.
enum LinrepStatus linrep_witness_check(const struct LinrepRepresentation *rep,
                                       const char *witness_json,
                                       bool *valid);

// Parses a rational expression. On a parse failure the byte offset is
// stored in `error_pos` when it is not NULL.
//
// # Safety
// `field` is live, `expr` is a NUL-terminated string, `out` is writable
// and `error_pos` is NULL or writable.
enum LinrepStatus linrep_expr_parse(const struct LinrepField *field,
                                    const char *expr,
                                    struct LinrepExpr **out,
                                    size_t *error_pos);

// Canonical text of `expr`; release with [`linrep_string_free`].
//
// # Safety
// `expr` is live and `out` is writable.
enum LinrepStatus linrep_expr_print(const struct LinrepExpr *expr, char **out);

// # Safety
// `expr` is NULL or a live expression handle.
void linrep_expr_free(struct LinrepExpr *expr);

// Randomized equivalence test over sizes 1..=4 in the degree-`ext_deg`
// extension of `field`.
//
// # Safety
// All handles are live and `verdict` is writable.
enum LinrepStatus linrep_ncrat_equiv(const struct LinrepExpr *left,
                                     const struct LinrepExpr *right,
                                     const struct LinrepField *field,
                                     uint64_t trials,
                                     uint32_t ext_deg,
                                     uint64_t seed,
                                     enum LinrepVerdict *verdict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINREP_H */
