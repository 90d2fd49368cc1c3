#include "msmlab/msmlab.h"

#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/snapshot.hpp"

struct msmlab_plan {
  std::vector<std::string> kinds;
};

struct msmlab_run {
  msmlab::RunResult result;
};

struct msmlab_field {
  msmlab::ComplexField field;
};

namespace {

thread_local std::string last_error;

msmlab_status status_of(msmlab::ErrorCode c) {
  using msmlab::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidArgument: return MSMLAB_INVALID_ARGUMENT;
    case ErrorCode::ShapeMismatch: return MSMLAB_SHAPE_MISMATCH;
    case ErrorCode::NonzeroMean: return MSMLAB_NONZERO_MEAN;
    case ErrorCode::ChartUndefined: return MSMLAB_CHART_UNDEFINED;
    case ErrorCode::NoConvergence: return MSMLAB_NO_CONVERGENCE;
    case ErrorCode::PicardDiverged: return MSMLAB_PICARD_DIVERGED;
    case ErrorCode::TooLarge: return MSMLAB_TOO_LARGE;
    case ErrorCode::ConfigError: return MSMLAB_CONFIG_ERROR;
    case ErrorCode::IoError: return MSMLAB_IO_ERROR;
  }
  return MSMLAB_INTERNAL_ERROR;
}

msmlab_status set_error(msmlab_status s, const char* what) {
  last_error = what;
  return s;
}

template <class F>
msmlab_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return MSMLAB_OK;
  } catch (const msmlab::Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(MSMLAB_TOO_LARGE, "out of memory");
  } catch (const std::exception& e) {
    return set_error(MSMLAB_INTERNAL_ERROR, e.what());
  } catch (...) {
    return set_error(MSMLAB_INTERNAL_ERROR, "unknown failure");
  }
}

msmlab::RunOverrides overrides(const msmlab_run_options* o) {
  msmlab::RunOverrides r;
  if (!o) return r;
  if (o->output_dir) r.output_dir = std::string(o->output_dir);
  if (o->has_seed) r.seed = o->seed;
  return r;
}

void need(const void* p, const char* what) {
  if (!p) msmlab::fail(msmlab::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

}  // namespace

extern "C" {

MSMLAB_API const char* msmlab_version(void) { return MSMLAB_VERSION_STRING; }

MSMLAB_API const char* msmlab_status_name(msmlab_status s) {
  switch (s) {
    case MSMLAB_OK: return "ok";
    case MSMLAB_INVALID_ARGUMENT: return "invalid_argument";
    case MSMLAB_SHAPE_MISMATCH: return "shape_mismatch";
    case MSMLAB_NONZERO_MEAN: return "nonzero_mean";
    case MSMLAB_CHART_UNDEFINED: return "chart_undefined";
    case MSMLAB_NO_CONVERGENCE: return "no_convergence";
    case MSMLAB_PICARD_DIVERGED: return "picard_diverged";
    case MSMLAB_TOO_LARGE: return "too_large";
    case MSMLAB_CONFIG_ERROR: return "config_error";
    case MSMLAB_IO_ERROR: return "io_error";
    case MSMLAB_INTERNAL_ERROR: return "internal_error";
  }
  return "unknown";
}

MSMLAB_API const char* msmlab_last_error(void) { return last_error.c_str(); }

MSMLAB_API msmlab_status msmlab_plan_parse(const char* config_json, const msmlab_run_options* options,
                                           msmlab_plan** out) {
  return guarded([&] {
    need(config_json, "config");
    need(out, "out");
    *out = nullptr;
    auto p = std::make_unique<msmlab_plan>();
    p->kinds = msmlab::validate_config(config_json, overrides(options));
    *out = p.release();
  });
}

MSMLAB_API size_t msmlab_plan_size(const msmlab_plan* plan) { return plan ? plan->kinds.size() : 0; }

MSMLAB_API const char* msmlab_plan_kind(const msmlab_plan* plan, size_t index) {
  if (!plan || index >= plan->kinds.size()) return nullptr;
  return plan->kinds[index].c_str();
}

MSMLAB_API void msmlab_plan_free(msmlab_plan* plan) { delete plan; }

MSMLAB_API msmlab_status msmlab_run_config(const char* config_json, const msmlab_run_options* options,
                                           msmlab_run** out) {
  return guarded([&] {
    need(config_json, "config");
    need(out, "out");
    *out = nullptr;
    auto r = std::make_unique<msmlab_run>();
    r->result = msmlab::run_config(config_json, overrides(options));
    *out = r.release();
  });
}

MSMLAB_API const char* msmlab_run_output_dir(const msmlab_run* run) {
  return run ? run->result.output_dir.c_str() : nullptr;
}

MSMLAB_API size_t msmlab_run_artifact_count(const msmlab_run* run) {
  return run ? run->result.artifacts.size() : 0;
}

MSMLAB_API const char* msmlab_run_artifact(const msmlab_run* run, size_t index) {
  if (!run || index >= run->result.artifacts.size()) return nullptr;
  return run->result.artifacts[index].c_str();
}

MSMLAB_API const char* msmlab_run_summary(const msmlab_run* run) {
  return run ? run->result.summary.c_str() : nullptr;
}

MSMLAB_API void msmlab_run_free(msmlab_run* run) { delete run; }

MSMLAB_API msmlab_status msmlab_field_from_preset(const char* preset_json, int n, double length, int line,
                                                  uint64_t seed, msmlab_field** out) {
  return guarded([&] {
    need(preset_json, "preset");
    need(out, "out");
    *out = nullptr;
    const msmlab::Grid2D g = line ? msmlab::Grid2D::line(n, length) : msmlab::Grid2D(n, length);
    const msmlab::PresetSpec p = msmlab::parse_preset(preset_json, seed, "preset");
    *out = new msmlab_field{msmlab::preset_field(p, g)};
  });
}

MSMLAB_API msmlab_status msmlab_field_read(const char* path, msmlab_field** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    const msmlab::Snapshot s = msmlab::read_snapshot(path);
    if (s.type == msmlab::SnapshotType::Vec3)
      msmlab::fail(msmlab::ErrorCode::ShapeMismatch, std::string(path) + " holds a map, not a field");
    *out = new msmlab_field{s.type == msmlab::SnapshotType::Real ? msmlab::to_complex(s.as_real()) : s.as_complex()};
  });
}

MSMLAB_API msmlab_status msmlab_field_write(const msmlab_field* field, const char* path) {
  return guarded([&] {
    need(field, "field");
    need(path, "path");
    msmlab::write_snapshot(path, msmlab::make_snapshot(field->field));
  });
}

MSMLAB_API msmlab_status msmlab_field_shape(const msmlab_field* field, int* nx, int* ny, double* length) {
  return guarded([&] {
    need(field, "field");
    const msmlab::Grid2D& g = field->field.grid;
    if (nx) *nx = g.nx();
    if (ny) *ny = g.ny();
    if (length) *length = g.length();
  });
}

MSMLAB_API msmlab_status msmlab_field_values(const msmlab_field* field, double* values, size_t count) {
  return guarded([&] {
    need(field, "field");
    need(values, "values");
    const auto& f = field->field;
    if (count < 2 * f.size()) msmlab::fail(msmlab::ErrorCode::ShapeMismatch, "values buffer is too small");
    for (std::size_t k = 0; k < f.size(); ++k) {
      values[2 * k] = f[k].real();
      values[2 * k + 1] = f[k].imag();
    }
  });
}

MSMLAB_API void msmlab_field_free(msmlab_field* field) { delete field; }

}  // extern "C"
