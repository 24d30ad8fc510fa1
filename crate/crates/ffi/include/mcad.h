#ifndef MCAD_H
#define MCAD_H

/* Generated by cbindgen from mcad-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum McadStatus {
  MCAD_STATUS_OK = 0,
  /**
   * A parameter violates a precondition.
   */
  MCAD_STATUS_INVALID_ARGUMENT = 1,
  /**
   * The evaluation left the numerically safe domain.
   */
  MCAD_STATUS_NUMERICAL_DOMAIN = 2,
  /**
   * A required pointer was null.
   */
  MCAD_STATUS_NULL_POINTER = 3,
  /**
   * Unexpected internal failure.
   */
  MCAD_STATUS_INTERNAL_ERROR = 4,
} McadStatus;

/**
 * Rule family selector.
 */
typedef enum McadVariant {
  MCAD_VARIANT_TYPE1 = 0,
  MCAD_VARIANT_TYPE2 = 1,
} McadVariant;

/**
 * Opaque probability distribution over integer positions.
 */
typedef struct McadDistribution McadDistribution;

/**
 * Opaque simulation handle; configured at creation, holds the dispersion
 * series after `mcad_simulation_run`.
 */
typedef struct McadSimulation McadSimulation;

/**
 * Ensemble run parameters. `width`/`height` of 0 request the automatic
 * torus size; `fit_from`/`fit_to` of 0 request the default window
 * `[steps/2, steps]`.
 */
typedef struct McadSimConfig {
  enum McadVariant variant;
  /**
   * Type-1 rotation probability (ignored for type 2).
   */
  double p;
  /**
   * Type-2 skip probability (ignored for type 1).
   */
  double ps;
  uint32_t steps;
  uint64_t trials;
  uint64_t seed;
  uint32_t width;
  uint32_t height;
  double dx;
  double dt;
  uint32_t fit_from;
  uint32_t fit_to;
} McadSimConfig;

/**
 * Result of a diffusion estimate.
 */
typedef struct McadEstimate {
  double k;
  double ci_low;
  double ci_high;
  uint32_t fit_from;
  uint32_t fit_to;
  double dx;
  double dt;
  uint64_t seed;
} McadEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Closed-form marginal distribution after `t` steps with rotation
 * probability `p`.
 * # Safety
 * `out` must be null or valid for one write.
 */
enum McadStatus mcad_closed_form_dist(uint32_t t, double p, struct McadDistribution **out);

/**
 * Marginal distribution of the master-equation chain after `t` steps with
 * initial direction split `eps`.
 * # Safety
 * `out` must be null or valid for one write.
 */
enum McadStatus mcad_chain_dist(uint32_t t, double p, double eps, struct McadDistribution **out);

/**
 * Time step the distribution was taken at.
 * # Safety
 * `dist` must be null or a live distribution handle.
 */
uint32_t mcad_dist_time(const struct McadDistribution *dist);

/**
 * Lowest position of the stored support.
 * # Safety
 * `dist` must be null or a live distribution handle.
 */
int64_t mcad_dist_support_min(const struct McadDistribution *dist);

/**
 * Number of stored support points.
 * # Safety
 * `dist` must be null or a live distribution handle.
 */
size_t mcad_dist_len(const struct McadDistribution *dist);

/**
 * Probability at position `x` (zero outside the support).
 * # Safety
 * `dist` must be null or a live handle; `out` null or valid for one write.
 */
enum McadStatus mcad_dist_prob(const struct McadDistribution *dist, int64_t x, double *out);

/**
 * Copies the dense probability vector (length `mcad_dist_len`) into `buf`.
 * # Safety
 * `dist` must be null or a live handle; `buf` null or valid for `len` writes.
 */
enum McadStatus mcad_dist_copy_probs(const struct McadDistribution *dist, double *buf, size_t len);

/**
 * Releases a distribution handle; null is a no-op.
 * # Safety
 * `dist` must be null or a handle not yet freed; it is invalid afterwards.
 */
void mcad_dist_free(struct McadDistribution *dist);

/**
 * `D_c(p) = p / (2 (1 - p))` in cell^2/step units.
 * # Safety
 * `out` must be null or valid for one write.
 */
enum McadStatus mcad_diffusion_coefficient(double p, double *out);

/**
 * Rotation probability realizing a target diffusion coefficient.
 * # Safety
 * `out` must be null or valid for one write.
 */
enum McadStatus mcad_calibrate_p(double target_dc, double *out);

/**
 * Type-2 diffusion coefficient `(1 - ps) / 2`.
 * # Safety
 * `out` must be null or valid for one write.
 */
enum McadStatus mcad_type2_diffusion_coefficient(double ps, double *out);

/**
 * Type-2 dispersion at step `t`.
 * # Safety
 * `out` must be null or valid for one write.
 */
enum McadStatus mcad_type2_dispersion(uint32_t t, double ps, double *out);

/**
 * Dispersion of the walk at step `t`.
 * # Safety
 * `out` must be null or valid for one write.
 */
enum McadStatus mcad_variance(uint32_t t, double p, double *out);

/**
 * Gaussian limit density at `x`.
 * # Safety
 * `out` must be null or valid for one write.
 */
enum McadStatus mcad_normal_pdf(double x, uint32_t t, double p, double *out);

/**
 * Total-variation distance between the lattice law and its Gaussian limit.
 * # Safety
 * `out` must be null or valid for one write.
 */
enum McadStatus mcad_tv_distance_to_normal(uint32_t t, double p, double *out);

/**
 * Cited empirical regression of `p` against the relative diffusion
 * coefficient; provided for comparison plots.
 */
double mcad_regression_p(double r);

/**
 * Rotation probability equivalent to rotating the fraction `xi` of
 * particles under the integer-alphabet percentage rule.
 * # Safety
 * `out` must be null or valid for one write.
 */
enum McadStatus mcad_xi_to_p(double xi, double *out);

/**
 * Direction-split generating functions `(G_t^+(z), G_t^-(z))`.
 * # Safety
 * `g_plus` and `g_minus` must each be null or valid for one write.
 */
enum McadStatus mcad_pgf_eval(double z, uint32_t t, double p, double *g_plus, double *g_minus);

/**
 * Validates the configuration and creates a simulation handle.
 * # Safety
 * `config` must be null or valid for a read; `out` null or valid for one write.
 */
enum McadStatus mcad_simulation_new(const struct McadSimConfig *config,
                                    struct McadSimulation **out);

/**
 * Runs the ensemble and writes the diffusion estimate.
 * # Safety
 * `sim` must be null or a live simulation handle; `out` null or valid for one write.
 */
enum McadStatus mcad_simulation_run(struct McadSimulation *sim, struct McadEstimate *out);

/**
 * Number of points in the recorded dispersion series (0 before a run).
 * # Safety
 * `sim` must be null or a live simulation handle.
 */
size_t mcad_simulation_series_len(const struct McadSimulation *sim);

/**
 * Copies the dispersion series into parallel arrays of length `len`.
 * # Safety
 * `sim` must be null or a live handle; the buffers null or valid for `len` writes each.
 */
enum McadStatus mcad_simulation_series(const struct McadSimulation *sim,
                                       uint32_t *t_buf,
                                       double *dispersion_buf,
                                       size_t len);

/**
 * Releases a simulation handle; null is a no-op.
 * # Safety
 * `sim` must be null or a handle not yet freed; it is invalid afterwards.
 */
void mcad_simulation_free(struct McadSimulation *sim);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MCAD_H */
