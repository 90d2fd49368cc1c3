#ifndef MSMLAB_MSMLAB_H
#define MSMLAB_MSMLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__)
#define MSMLAB_API __attribute__((visibility("default")))
#else
#define MSMLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/*
 * Every function returning msmlab_status leaves a message for the calling
 * thread on failure; read it with msmlab_last_error(). Handles are opaque and
 * owned by the caller until passed to the matching *_free function.
 * Returned strings stay valid until the owning handle is freed.
 */

typedef enum msmlab_status {
  MSMLAB_OK = 0,
  MSMLAB_INVALID_ARGUMENT = 1,
  MSMLAB_SHAPE_MISMATCH = 2,
  MSMLAB_NONZERO_MEAN = 3,
  MSMLAB_CHART_UNDEFINED = 4,
  MSMLAB_NO_CONVERGENCE = 5,
  MSMLAB_PICARD_DIVERGED = 6,
  MSMLAB_TOO_LARGE = 7,
  MSMLAB_CONFIG_ERROR = 8,
  MSMLAB_IO_ERROR = 9,
  MSMLAB_INTERNAL_ERROR = 10
} msmlab_status;

MSMLAB_API const char* msmlab_version(void);
MSMLAB_API const char* msmlab_status_name(msmlab_status status);
/* Message of the last failure on this thread, "" if none. */
MSMLAB_API const char* msmlab_last_error(void);

/* ---- experiment runs ---- */

typedef struct msmlab_run_options {
  /* Overrides the config's output_dir when not NULL. */
  const char* output_dir;
  /* Overrides the config's seed when nonzero. */
  int has_seed;
  uint64_t seed;
} msmlab_run_options;

typedef struct msmlab_plan msmlab_plan;
typedef struct msmlab_run msmlab_run;

/* Parses and validates a JSON config without running anything. */
MSMLAB_API msmlab_status msmlab_plan_parse(const char* config_json, const msmlab_run_options* options,
                                           msmlab_plan** out);
MSMLAB_API size_t msmlab_plan_size(const msmlab_plan* plan);
MSMLAB_API const char* msmlab_plan_kind(const msmlab_plan* plan, size_t index);
MSMLAB_API void msmlab_plan_free(msmlab_plan* plan);

/* Runs every experiment and writes artifacts plus manifest.sha256. */
MSMLAB_API msmlab_status msmlab_run_config(const char* config_json, const msmlab_run_options* options,
                                           msmlab_run** out);
MSMLAB_API const char* msmlab_run_output_dir(const msmlab_run* run);
MSMLAB_API size_t msmlab_run_artifact_count(const msmlab_run* run);
MSMLAB_API const char* msmlab_run_artifact(const msmlab_run* run, size_t index);
/* JSON object with the scalar results of every experiment. */
MSMLAB_API const char* msmlab_run_summary(const msmlab_run* run);
MSMLAB_API void msmlab_run_free(msmlab_run* run);

/* ---- fields ---- */

typedef struct msmlab_field msmlab_field;

/*
 * Complex field from a preset object such as {"preset": "single_mode", "k": 1}
 * on an n x n grid of period length, or on a line grid when line != 0.
 */
MSMLAB_API msmlab_status msmlab_field_from_preset(const char* preset_json, int n, double length, int line,
                                                  uint64_t seed, msmlab_field** out);
/* Reads a real or complex snapshot file. */
MSMLAB_API msmlab_status msmlab_field_read(const char* path, msmlab_field** out);
MSMLAB_API msmlab_status msmlab_field_write(const msmlab_field* field, const char* path);
MSMLAB_API msmlab_status msmlab_field_shape(const msmlab_field* field, int* nx, int* ny, double* length);
/* Copies interleaved (re, im) values, row-major with x fastest; count is the
 * number of doubles available in values and must be at least 2 nx ny. */
MSMLAB_API msmlab_status msmlab_field_values(const msmlab_field* field, double* values, size_t count);
MSMLAB_API void msmlab_field_free(msmlab_field* field);

#ifdef __cplusplus
}
#endif

#endif
