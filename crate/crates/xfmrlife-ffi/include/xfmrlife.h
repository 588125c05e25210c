/* C ABI for the xfmrlife transformer lifetime estimator. */

#ifndef XFMRLIFE_H
#define XFMRLIFE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum XlStatus {
  XlStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  XlStatus_NullPointer = 1,
  /**
   * The JSON configuration failed to parse or validate.
   */
  XlStatus_InvalidConfig = 2,
  /**
   * A value was outside its physical or mathematical domain.
   */
  XlStatus_DomainError = 3,
  /**
   * The API was driven in an unsupported way.
   */
  XlStatus_UsageError = 4,
  /**
   * Every observed loss was zero; no finite estimate exists.
   */
  XlStatus_NoObservableAging = 5,
} XlStatus;

/**
 * Opaque streaming estimator handle.
 */
typedef struct XlPipeline XlPipeline;

/**
 * Per-step outputs of the estimation loop.
 */
typedef struct XlStepResult {
  /**
   * 0-based index of the processed interval.
   */
  uint64_t hour_index;
  /**
   * Hottest-spot temperature of the interval, °C.
   */
  double hotspot_temp_c;
  /**
   * Aging acceleration factor at that temperature.
   */
  double aging_factor;
  /**
   * Per-unit loss of life over the interval.
   */
  double interval_loss_pu;
  /**
   * Running mean of all per-interval losses so far.
   */
  double cma_pu;
  double estimate_total_years;
  double estimate_remaining_years;
  double estimate_elapsed_years;
  /**
   * Nonzero once the estimate has converged.
   */
  bool converged;
  /**
   * Step at which convergence was detected; 0 while not converged.
   */
  uint64_t converged_at_step;
} XlStepResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a pipeline. `config_json` may be null for the built-in defaults
 * (the studied transformer, standard aging constants, paper-mode
 * initialization, 1-hour intervals); otherwise it must be a UTF-8 JSON
 * document in the same schema as the CLI config file.
 *
 * On success `*out` owns the handle; release it with
 * [`xl_pipeline_free`].
 *
 * # Safety
 * `out` must point to writable storage for one pointer; `config_json`,
 * when non-null, must be a valid NUL-terminated string.
 */
enum XlStatus xl_pipeline_new(const char *config_json, struct XlPipeline **out);

/**
 * Process one measured hottest-spot temperature (°C) and write the
 * per-step outputs to `*out`.
 *
 * # Safety
 * `pipeline` must be a live handle from [`xl_pipeline_new`]; `out` must
 * point to writable storage for one [`XlStepResult`].
 */
enum XlStatus xl_pipeline_push_hotspot(struct XlPipeline *pipeline,
                                       double hotspot_temp_c,
                                       struct XlStepResult *out);

/**
 * Simulate one operating interval (ambient °C, initial and ultimate
 * per-unit load ratios; the configured interval length applies) and
 * write the per-step outputs to `*out`.
 *
 * # Safety
 * Same contract as [`xl_pipeline_push_hotspot`].
 */
enum XlStatus xl_pipeline_push_interval(struct XlPipeline *pipeline,
                                        double ambient_c,
                                        double load_ratio_initial,
                                        double load_ratio_ultimate,
                                        struct XlStepResult *out);

/**
 * Step at which the estimate converged, or 0 while it has not.
 *
 * # Safety
 * `pipeline` must be a live handle or null (null reports 0).
 */
uint64_t xl_pipeline_converged_step(const struct XlPipeline *pipeline);

/**
 * Release a handle. Passing null is a no-op.
 *
 * # Safety
 * `pipeline` must be a handle from [`xl_pipeline_new`] that has not
 * already been freed.
 */
void xl_pipeline_free(struct XlPipeline *pipeline);

/**
 * Description of the most recent failure on the calling thread. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *xl_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *xl_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XFMRLIFE_H */
