#ifndef NNREP_H
#define NNREP_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum NnrepStatus {
  NNREP_STATUS_OK = 0,
  NNREP_STATUS_NULL_POINTER = 1,
  NNREP_STATUS_INVALID_UTF8 = 2,
  NNREP_STATUS_PARSE = 3,
  NNREP_STATUS_INVALID_ARGUMENT = 4,
  NNREP_STATUS_TIE = 5,
  NNREP_STATUS_NOT_WELL_DEFINED = 6,
  NNREP_STATUS_CONSTRUCTION = 7,
  NNREP_STATUS_RESOURCE_LIMIT = 8,
  NNREP_STATUS_PANIC = 9,
} NnrepStatus;

typedef struct NnrepFunction NnrepFunction;

typedef struct NnrepPolynomial NnrepPolynomial;

typedef struct NnrepRepresentation NnrepRepresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *nnrep_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string obtained from this library, freed once.
 */
void nnrep_string_free(char *s);

/**
 * Parses a function spec such as `maj:5` or `table:2:8`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out_fn` a writable pointer.
 */
enum NnrepStatus nnrep_function_parse(const char *spec, struct NnrepFunction **out_fn);

/**
 * # Safety
 * `f` must be null or a handle from [`nnrep_function_parse`], freed once.
 */
void nnrep_function_free(struct NnrepFunction *f);

/**
 * Number of variables, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live function handle.
 */
size_t nnrep_function_arity(const struct NnrepFunction *f);

/**
 * Value of the function at the input whose bit i is x_{i+1}.
 *
 * # Safety
 * `f` must be a live function handle and `value` writable.
 */
enum NnrepStatus nnrep_function_eval(const struct NnrepFunction *f, uint32_t input, bool *value);

/**
 * Builds a representation. `method` is one of `symmetric`, `threshold`,
 * `majority-bnn`, `parity-bnn`, `covering`.
 *
 * # Safety
 * `spec` and `method` must be NUL-terminated strings, `out_rep` writable.
 */
enum NnrepStatus nnrep_construct(const char *spec,
                                 const char *method,
                                 struct NnrepRepresentation **out_rep);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out_rep` writable.
 */
enum NnrepStatus nnrep_representation_from_json(const char *json,
                                                struct NnrepRepresentation **out_rep);

/**
 * Canonical JSON of a representation; release with [`nnrep_string_free`].
 *
 * # Safety
 * `rep` must be a live handle and `out_json` writable.
 */
enum NnrepStatus nnrep_representation_to_json(const struct NnrepRepresentation *rep,
                                              char **out_json);

/**
 * Number of prototypes, or 0 for a null handle.
 *
 * # Safety
 * `rep` must be null or a live handle.
 */
size_t nnrep_representation_size(const struct NnrepRepresentation *rep);

/**
 * # Safety
 * `rep` must be null or a handle from this library, freed once.
 */
void nnrep_representation_free(struct NnrepRepresentation *rep);

/**
 * Checks `rep` against `f` on every input. `k == 0` selects the
 * nearest-neighbor rule; otherwise the k-NN rule.
 *
 * # Safety
 * Handles must be live and `ok` writable.
 */
enum NnrepStatus nnrep_verify(const struct NnrepFunction *f,
                              const struct NnrepRepresentation *rep,
                              size_t k,
                              bool *ok);

/**
 * Classifies one Boolean point given as `len` bytes, each 0 or 1. Writes 1
 * for positive and 0 for negative. Ties report [`NnrepStatus::Tie`] or
 * [`NnrepStatus::NotWellDefined`].
 *
 * # Safety
 * `bits` must point to `len` readable bytes, `label` must be writable.
 */
enum NnrepStatus nnrep_classify(const struct NnrepRepresentation *rep,
                                const uint8_t *bits,
                                size_t len,
                                size_t k,
                                int32_t *label);

/**
 * Compiles a verified representation into a sign polynomial.
 *
 * # Safety
 * Handles must be live and `out_poly` writable.
 */
enum NnrepStatus nnrep_compile_ptf(const struct NnrepFunction *f,
                                   const struct NnrepRepresentation *rep,
                                   struct NnrepPolynomial **out_poly);

/**
 * Checks the polynomial's sign against `f` on every input.
 *
 * # Safety
 * Handles must be live and `ok` writable.
 */
enum NnrepStatus nnrep_polynomial_verify(const struct NnrepFunction *f,
                                         const struct NnrepPolynomial *poly,
                                         bool *ok);

/**
 * Number of monomials, or 0 for a null handle.
 *
 * # Safety
 * `poly` must be null or a live handle.
 */
size_t nnrep_polynomial_term_count(const struct NnrepPolynomial *poly);

/**
 * Canonical JSON of a polynomial; release with [`nnrep_string_free`].
 *
 * # Safety
 * `poly` must be a live handle and `out_json` writable.
 */
enum NnrepStatus nnrep_polynomial_to_json(const struct NnrepPolynomial *poly, char **out_json);

/**
 * # Safety
 * `poly` must be null or a handle from this library, freed once.
 */
void nnrep_polynomial_free(struct NnrepPolynomial *poly);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NNREP_H */
