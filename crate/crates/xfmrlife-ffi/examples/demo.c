/* Stream a constant 110 °C year through the estimator.
 *
 * Build from the repository root:
 *   cargo build --release -p xfmrlife-ffi
 *   cc crates/xfmrlife-ffi/examples/demo.c \
 *      -Icrates/xfmrlife-ffi/include \
 *      target/release/libxfmrlife_ffi.a -lpthread -ldl -lm -o demo
 */
#include <stdio.h>

#include "xfmrlife.h"

int main(void) {
  XlPipeline *pipeline = NULL;
  XlStatus status = xl_pipeline_new(NULL, &pipeline);
  if (status != XlStatus_Ok) {
    fprintf(stderr, "init failed: %s\n", xl_last_error_message());
    return 1;
  }

  XlStepResult step;
  for (int hour = 0; hour < 8760; ++hour) {
    status = xl_pipeline_push_hotspot(pipeline, 110.0, &step);
    if (status != XlStatus_Ok) {
      fprintf(stderr, "step %d failed: %s\n", hour, xl_last_error_message());
      xl_pipeline_free(pipeline);
      return 1;
    }
  }

  printf("xfmrlife %s: estimate %.4f years (remaining %.4f + elapsed %.4f), "
         "converged at step %llu\n",
         xl_version(), step.estimate_total_years, step.estimate_remaining_years,
         step.estimate_elapsed_years,
         (unsigned long long)step.converged_at_step);

  xl_pipeline_free(pipeline);
  return 0;
}
