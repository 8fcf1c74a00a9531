#ifndef THT_H
#define THT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/* Handles are opaque; free each one with its matching tht_*_free. */

typedef enum ThtStatus {
  THT_STATUS_OK = 0,
  THT_STATUS_NULL_POINTER = 1,
  THT_STATUS_INVALID_ARGUMENT = 2,
  THT_STATUS_DIMENSION_MISMATCH = 3,
  THT_STATUS_NON_FINITE = 4,
  THT_STATUS_UNDEFINED = 5,
  THT_STATUS_PANIC = 6,
} ThtStatus;

typedef struct ThtModel ThtModel;

typedef struct ThtRng ThtRng;

typedef struct ThtSampler ThtSampler;

/*
 `U(x)` evaluated by the caller.
 */
typedef double (*ThtPotentialFn)(const double *x, size_t dim, void *user_data);

/*
 Writes `∇U(x)` into `grad`.
 */
typedef void (*ThtGradientFn)(const double *x, double *grad, size_t dim, void *user_data);

/*
 Summary of one transition.
 */
typedef struct ThtStepInfo {
  /*
   1 when the state moved.
   */
  uint8_t accepted;
  /*
   Extended-Hamiltonian increment at the accepted candidate; NaN if none.
   */
  double delta_h;
  int64_t k0;
  size_t proposals_used;
  size_t acceptable_found;
} ThtStepInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the most recent failure on this thread, or "" after a
 success. Valid until the next call into the library on the same thread.
 */
const char *tht_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *tht_version(void);

/*
 Random stream seeded from `seed`.

 # Safety
 `out` must be a valid pointer.
 */
enum ThtStatus tht_rng_new(uint64_t seed, struct ThtRng **out);

/*
 Stream number `index` derived from `base_seed`, as used for parallel chains.

 # Safety
 `out` must be a valid pointer.
 */
enum ThtStatus tht_rng_derive(uint64_t base_seed, uint64_t index, struct ThtRng **out);

/*
 # Safety
 `rng` and `out` must be valid pointers.
 */
enum ThtStatus tht_rng_uniform(struct ThtRng *rng, double *out);

/*
 # Safety
 `rng` and `out` must be valid pointers.
 */
enum ThtStatus tht_rng_standard_normal(struct ThtRng *rng, double *out);

/*
 # Safety
 `rng` must come from `tht_rng_new`/`tht_rng_derive` or be null.
 */
void tht_rng_free(struct ThtRng *rng);

/*
 Mixture of `n_components` isotropic normals in `dim` dimensions.
 `means` is row-major `n_components × dim`; weights must sum to one.

 # Safety
 Arrays must hold the stated number of elements; `out` must be valid.
 */
enum ThtStatus tht_model_mixture_new(size_t dim,
                                     size_t n_components,
                                     const double *weights,
                                     const double *means,
                                     const double *sds,
                                     struct ThtModel **out);

/*
 `U(x) = ‖x‖^γ` in `dim` dimensions.

 # Safety
 `out` must be a valid pointer.
 */
enum ThtStatus tht_model_power_new(size_t dim, double gamma, struct ThtModel **out);

/*
 Model backed by caller-supplied functions. The callbacks are invoked only
 from the thread that calls into the library.

 # Safety
 The callbacks must be valid for the lifetime of the model and accept
 `user_data`; `out` must be valid.
 */
enum ThtStatus tht_model_callback_new(size_t dim,
                                      ThtPotentialFn potential,
                                      ThtGradientFn gradient,
                                      void *user_data,
                                      struct ThtModel **out);

/*
 # Safety
 `model` must be a valid handle.
 */
size_t tht_model_dim(const struct ThtModel *model);

/*
 # Safety
 `x` holds `dim` entries; `model` and `out` are valid.
 */
enum ThtStatus tht_model_potential(const struct ThtModel *model,
                                   const double *x,
                                   size_t dim,
                                   double *out);

/*
 # Safety
 `x` and `grad` hold `dim` entries; `model` is valid.
 */
enum ThtStatus tht_model_gradient(const struct ThtModel *model,
                                  const double *x,
                                  size_t dim,
                                  double *grad);

/*
 # Safety
 `model` must come from a `tht_model_*_new` function or be null.
 */
void tht_model_free(struct ThtModel *model);

/*
 Tempered transition settings with the cosine schedule
 `η_k = η*(1 − cos 2πk/K)`, identity mass and `ψ_K` uniform on
 `|k| ≤ psi_half_width`.

 # Safety
 `out` must be a valid pointer.
 */
enum ThtStatus tht_sampler_new(double eps,
                               double eta_star,
                               size_t period,
                               double gamma_hat,
                               size_t psi_half_width,
                               size_t n_acceptable,
                               size_t max_proposals,
                               struct ThtSampler **out);

/*
 # Safety
 `sampler` must come from `tht_sampler_new` or be null.
 */
void tht_sampler_free(struct ThtSampler *sampler);

/*
 One transition from `x` (length `dim`), written to `x_next`. `info` may be
 null.

 # Safety
 Handles must be valid; `x` and `x_next` hold `dim` entries and may alias.
 */
enum ThtStatus tht_sampler_step(const struct ThtSampler *sampler,
                                const struct ThtModel *model,
                                struct ThtRng *rng,
                                const double *x,
                                size_t dim,
                                double *x_next,
                                struct ThtStepInfo *info);

/*
 Runs `iters` transitions from `x0`. `states` receives `(iters + 1) × dim`
 values row by row, starting with `x0`; `accepted` (nullable) receives
 `iters` flags.

 # Safety
 Handles must be valid and the arrays sized as stated.
 */
enum ThtStatus tht_run_chain(const struct ThtSampler *sampler,
                             const struct ThtModel *model,
                             struct ThtRng *rng,
                             const double *x0,
                             size_t dim,
                             size_t iters,
                             double *states,
                             uint8_t *accepted);

/*
 Rank-normalized split R-hat of `n_chains` chains of `length` draws stored
 row by row in `values`. Returns `THT_STATUS_UNDEFINED` for constant input.

 # Safety
 `values` holds `n_chains × length` entries; `out` is valid.
 */
enum ThtStatus tht_rank_normalized_rhat(const double *values,
                                        size_t n_chains,
                                        size_t length,
                                        double *out);

/*
 Chernoff bound on `P(χ²_d > 2Δ)`.
 */
double tht_chernoff_jump_bound(size_t d, double delta);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THT_H */
