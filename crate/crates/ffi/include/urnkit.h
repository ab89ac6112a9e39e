#ifndef URNKIT_H
#define URNKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UrnStatus {
  URN_STATUS_OK = 0,
  URN_STATUS_NULL_POINTER = 1,
  URN_STATUS_INVALID_UTF8 = 2,
  URN_STATUS_INVALID_SPEC = 3,
  URN_STATUS_INVALID_ARGUMENT = 4,
  URN_STATUS_INVALID_STATE = 5,
  URN_STATUS_NON_TERMINATING = 6,
  URN_STATUS_QUADRATURE_FAILURE = 7,
  URN_STATUS_OUT_OF_RANGE = 8,
  URN_STATUS_PANIC = 9,
} UrnStatus;

/*
 Exact law of the absorbing state, entries ordered by state.
 */
typedef struct UrnDistribution UrnDistribution;

/*
 Simulated absorbing-state counts, entries ordered by state.
 */
typedef struct UrnEmpirical UrnEmpirical;

/*
 An urn: transition matrix, absorbing walls and draw weights.
 */
typedef struct UrnModel UrnModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Static description of a status code.
 */
const char *urn_status_str(enum UrnStatus status);

/*
 Message for the last failed call on this thread; empty after a success.
 Valid until the next call into this library on the same thread.
 */
const char *urn_last_error_message(void);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void urn_string_free(char *s);

/*
 Named urn: `pills`, `rpills:R`, `pills-variant`, `cannibal`,
 `cannibal-unmodified`, `okcorral` or `sampling`.

 # Safety
 `name` must be a NUL-terminated string; `out` must be writable.
 */
enum UrnStatus urn_model_from_preset(const char *name, struct UrnModel **out);

/*
 Urn from the JSON form
 `{"colors", "matrix", "absorbing_caps", "weight_mode"}`.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum UrnStatus urn_model_from_json(const char *json, struct UrnModel **out);

/*
 # Safety
 `model` must be a live handle; `out` must be writable.
 */
enum UrnStatus urn_model_to_json(const struct UrnModel *model, char **out);

/*
 # Safety
 `model` must be a live handle; `out` must be writable.
 */
enum UrnStatus urn_model_colors(const struct UrnModel *model, size_t *out);

/*
 # Safety
 `model` must be null or a handle from this library, not yet freed.
 */
void urn_model_free(struct UrnModel *model);

/*
 Exact absorption distribution from the state `counts[0..len]`.

 # Safety
 `model` must be a live handle, `counts` must point to `len` values and
 `out` must be writable.
 */
enum UrnStatus urn_solve(const struct UrnModel *model,
                         const uint32_t *counts_ptr,
                         size_t len,
                         struct UrnDistribution **out);

/*
 Number of absorbing states with positive probability.

 # Safety
 `dist` must be a live handle; `out` must be writable.
 */
enum UrnStatus urn_distribution_len(const struct UrnDistribution *dist, size_t *out);

/*
 Copies the counts of entry `index` into `out[0..len]`; `len` must equal
 the number of colors.

 # Safety
 `dist` must be a live handle; `out` must have room for `len` values.
 */
enum UrnStatus urn_distribution_state(const struct UrnDistribution *dist,
                                      size_t index,
                                      uint32_t *out,
                                      size_t len);

/*
 Probability of entry `index`, rounded to the nearest double.

 # Safety
 `dist` must be a live handle; `out` must be writable.
 */
enum UrnStatus urn_distribution_probability(const struct UrnDistribution *dist,
                                            size_t index,
                                            double *out);

/*
 Exact probability of entry `index` as `"num/den"` (or an integer).

 # Safety
 `dist` must be a live handle; `out` must be writable.
 */
enum UrnStatus urn_distribution_probability_str(const struct UrnDistribution *dist,
                                                size_t index,
                                                char **out);

/*
 `sum P{state} v1^(last count) v2^(first count)`; for two colors, `v1`
 marks black balls and `v2` white balls.

 # Safety
 `dist` must be a live handle; `out` must be writable.
 */
enum UrnStatus urn_distribution_pgf(const struct UrnDistribution *dist,
                                    double v1,
                                    double v2,
                                    double *out);

/*
 Exact factorial moment `E(X (X-1) ... (X-order+1))` of the first count.

 # Safety
 `dist` must be a live handle; `out` must be writable.
 */
enum UrnStatus urn_distribution_factorial_moment(const struct UrnDistribution *dist,
                                                 size_t order,
                                                 char **out);

/*
 Exact mean and variance of the first count.

 # Safety
 `dist` must be a live handle; both out pointers must be writable.
 */
enum UrnStatus urn_distribution_mean_variance(const struct UrnDistribution *dist,
                                              char **mean_out,
                                              char **variance_out);

/*
 # Safety
 `dist` must be null or a handle from this library, not yet freed.
 */
void urn_distribution_free(struct UrnDistribution *dist);

/*
 Runs `replications` seeded simulations from `counts[0..len]`. The counts
 depend only on the inputs, not on thread scheduling.

 # Safety
 `model` must be a live handle, `counts` must point to `len` values and
 `out` must be writable.
 */
enum UrnStatus urn_simulate(const struct UrnModel *model,
                            const uint32_t *counts_ptr,
                            size_t len,
                            uint64_t replications,
                            uint64_t seed,
                            struct UrnEmpirical **out);

/*
 # Safety
 `emp` must be a live handle; `out` must be writable.
 */
enum UrnStatus urn_empirical_len(const struct UrnEmpirical *emp, size_t *out);

/*
 # Safety
 `emp` must be a live handle; `out` must have room for `len` values.
 */
enum UrnStatus urn_empirical_state(const struct UrnEmpirical *emp,
                                   size_t index,
                                   uint32_t *out,
                                   size_t len);

/*
 Number of replications absorbed at entry `index`, and the 99% half-width
 of its frequency.

 # Safety
 `emp` must be a live handle; both out pointers must be writable.
 */
enum UrnStatus urn_empirical_count(const struct UrnEmpirical *emp,
                                   size_t index,
                                   uint64_t *count_out,
                                   double *half_width_out);

/*
 # Safety
 `emp` must be null or a handle from this library, not yet freed.
 */
void urn_empirical_free(struct UrnEmpirical *emp);

/*
 Pills urn pgf of the single-unit count (`n` single, `m >= 1` double-unit
 pills), accurate to 1e-10.

 # Safety
 `out` must be writable.
 */
enum UrnStatus urn_pills_pgf(uint32_t n, uint32_t m, double v, double *out);

/*
 r-pills pgf of the single-unit count, `counts = {n_1, ..., n_r}` with
 `r >= 3`, accurate to 1e-8.

 # Safety
 `counts` must point to `len` values; `out` must be writable.
 */
enum UrnStatus urn_rpills_pgf(const uint32_t *counts_ptr, size_t len, double v, double *out);

/*
 # Safety
 `out` must be writable.
 */
enum UrnStatus urn_pills_expectation(uint32_t n, uint32_t m, char **out);

/*
 Pills variant started with `n` white and `2m` black balls.

 # Safety
 `out` must be writable.
 */
enum UrnStatus urn_variant_pills_expectation(uint32_t n, uint32_t m, char **out);

/*
 # Safety
 `out` must be writable.
 */
enum UrnStatus urn_cannibal_pmf(uint32_t n, uint32_t m, uint32_t k, char **out);

/*
 # Safety
 `out` must be writable.
 */
enum UrnStatus urn_okcorral_survive_prob(uint32_t n, uint32_t m, char **out);

/*
 # Safety
 `out` must be writable.
 */
enum UrnStatus urn_okcorral_survivor_pmf(uint32_t n, uint32_t m, uint32_t k, char **out);

/*
 # Safety
 `out` must be writable.
 */
enum UrnStatus urn_sampling_survive_prob(uint32_t n, uint32_t m, char **out);

/*
 # Safety
 `out` must be writable.
 */
enum UrnStatus urn_sampling_pmf(uint32_t n, uint32_t m, uint32_t k, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* URNKIT_H */
