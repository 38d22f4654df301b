#ifndef SONINE_H
#define SONINE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SonineStatus {
  SONINE_STATUS_OK = 0,
  SONINE_STATUS_INVALID_ARGUMENT = 1,
  SONINE_STATUS_OUT_OF_RANGE = 2,
  SONINE_STATUS_SINGULAR = 3,
  SONINE_STATUS_UNSUPPORTED = 4,
  SONINE_STATUS_NUMERICAL_FAILURE = 5,
  SONINE_STATUS_NULL_POINTER = 6,
  SONINE_STATUS_PARSE = 7,
  SONINE_STATUS_PANIC = 8,
} SonineStatus;

/**
 * A validated kernel description.
 */
typedef struct SonineKernel SonineKernel;

/**
 * A solved `X = B·δ + F`, with `F` sampled at the grid nodes.
 */
typedef struct SonineSolution SonineSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON kernel description into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SonineStatus sonine_kernel_from_json(const char *json, struct SonineKernel **out);

/**
 * Releases a kernel handle. Null is ignored.
 *
 * # Safety
 * `kernel` must come from [`sonine_kernel_from_json`] and not be freed twice.
 */
void sonine_kernel_free(struct SonineKernel *kernel);

/**
 * Matrix size `m` of the kernel; values are `m × m`.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum SonineStatus sonine_kernel_rank(const struct SonineKernel *kernel, size_t *out);

/**
 * Writes `A(t)` row-major into `out[0..m²]`.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum SonineStatus sonine_kernel_eval(const struct SonineKernel *kernel,
                                     double t,
                                     double *out,
                                     size_t len);

/**
 * Writes the closed-form Laplace transform `Ã(p)` row-major into `out[0..m²]`.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum SonineStatus sonine_kernel_laplace(const struct SonineKernel *kernel,
                                        double p,
                                        double *out,
                                        size_t len);

/**
 * Solves `A∗X = I` on a uniform grid of `cells` cells over `(0, horizon]`.
 *
 * # Safety
 * `out` must be a valid pointer; free the result with [`sonine_solution_free`].
 */
enum SonineStatus sonine_solve_sonine(const struct SonineKernel *kernel,
                                      double horizon,
                                      size_t cells,
                                      struct SonineSolution **out);

/**
 * Solves `A∗X = t·I` on a uniform grid of `cells` cells over `(0, horizon]`.
 *
 * # Safety
 * `out` must be a valid pointer; free the result with [`sonine_solution_free`].
 */
enum SonineStatus sonine_solve_duality(const struct SonineKernel *kernel,
                                       double horizon,
                                       size_t cells,
                                       struct SonineSolution **out);

/**
 * Releases a solution handle. Null is ignored.
 *
 * # Safety
 * `solution` must come from a solver call and not be freed twice.
 */
void sonine_solution_free(struct SonineSolution *solution);

/**
 * Number of nodes and matrix size of a solution.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum SonineStatus sonine_solution_shape(const struct SonineSolution *solution,
                                        size_t *nodes,
                                        size_t *rank);

/**
 * Copies the δ-atom `B` row-major into `out[0..m²]`.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
enum SonineStatus sonine_solution_atom(const struct SonineSolution *solution,
                                       double *out,
                                       size_t len);

/**
 * Copies the node times into `times[0..n]` and the regular part, node by
 * node and row-major within a node, into `values[0..n·m²]`.
 *
 * # Safety
 * `times` and `values` must point to `times_len` and `values_len` writable doubles.
 */
enum SonineStatus sonine_solution_samples(const struct SonineSolution *solution,
                                          double *times,
                                          size_t times_len,
                                          double *values,
                                          size_t values_len);

/**
 * Message for the most recent failed call on this thread, or an empty
 * string if none has failed.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *sonine_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SONINE_H */
