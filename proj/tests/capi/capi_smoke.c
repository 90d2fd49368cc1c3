/* Exercises the C API from C: status codes, messages, handles. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "msmlab/msmlab.h"

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : "capi_smoke_out";
  msmlab_run_options opt = {dir, 0, 0};
  msmlab_plan* plan = NULL;
  msmlab_run* run = NULL;
  msmlab_field* field = NULL;
  double values[2 * 16 * 16];
  int nx = 0, ny = 0;
  double length = 0.0;
  size_t i;

  EXPECT(strlen(msmlab_version()) > 0);
  EXPECT(strcmp(msmlab_status_name(MSMLAB_CONFIG_ERROR), "config_error") == 0);

  EXPECT(msmlab_plan_parse("{\"version\": 1, \"typo\": 0}", NULL, &plan) == MSMLAB_CONFIG_ERROR);
  EXPECT(plan == NULL);
  EXPECT(strstr(msmlab_last_error(), "'typo'") != NULL);
  EXPECT(msmlab_plan_parse(NULL, NULL, &plan) == MSMLAB_INVALID_ARGUMENT);

  EXPECT(msmlab_plan_parse("{\"version\": 1, \"experiments\": [{\"kind\": \"msm_run\"}, {\"kind\": \"hasimoto_1d\"}]}",
                           NULL, &plan) == MSMLAB_OK);
  EXPECT(strlen(msmlab_last_error()) == 0);
  EXPECT(msmlab_plan_size(plan) == 2);
  EXPECT(strcmp(msmlab_plan_kind(plan, 1), "hasimoto_1d") == 0);
  EXPECT(msmlab_plan_kind(plan, 2) == NULL);
  msmlab_plan_free(plan);

  EXPECT(msmlab_run_config("{\"version\": 1, \"experiments\": []}", &opt, &run) == MSMLAB_OK);
  EXPECT(msmlab_run_artifact_count(run) == 0);
  EXPECT(strcmp(msmlab_run_output_dir(run), dir) == 0);
  EXPECT(strstr(msmlab_run_summary(run), "\"experiments\"") != NULL);
  msmlab_run_free(run);

  EXPECT(msmlab_field_from_preset("{\"preset\": \"single_mode\", \"k\": 1}", 16, 6.283185307179586, 0, 1, &field) ==
         MSMLAB_OK);
  EXPECT(msmlab_field_shape(field, &nx, &ny, &length) == MSMLAB_OK);
  EXPECT(nx == 16 && ny == 16);
  EXPECT(msmlab_field_values(field, values, 10) == MSMLAB_SHAPE_MISMATCH);
  EXPECT(msmlab_field_values(field, values, sizeof values / sizeof values[0]) == MSMLAB_OK);
  for (i = 0; i < 16 * 16; ++i) EXPECT(fabs(hypot(values[2 * i], values[2 * i + 1]) - 1.0) < 1e-14);
  msmlab_field_free(field);

  EXPECT(msmlab_field_from_preset("{\"preset\": \"zero\"}", 12, 1.0, 0, 1, &field) == MSMLAB_INVALID_ARGUMENT);
  EXPECT(field == NULL);
  EXPECT(msmlab_field_read("/nonexistent/file.msmf", &field) == MSMLAB_IO_ERROR);

  msmlab_field_free(NULL);
  msmlab_run_free(NULL);
  msmlab_plan_free(NULL);

  if (failures) fprintf(stderr, "%d failures\n", failures);
  return failures ? EXIT_FAILURE : EXIT_SUCCESS;
}
