#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/field.hpp"
#include "core/map_dynamics.hpp"

namespace msmlab {

/// Named initial data. Parameters not given take the preset defaults.
///   zero                                          (no parameters)
///   single_mode    k, ky = 0, amplitude = 1
///   smooth_bump    amplitude = 0.5, width = 4, center_x, center_y, twist_x = 1, twist_y = 2
///   soliton_1d     eta = 1, c = 1                 (line grids only)
///   near_north_pole theta0 = 2.5, width = 4       (sphere maps only)
///   random_seeded  seed = run seed, kmax = 4, amplitude = 0.5
///   snapshot       path                           (snapshot file on the same grid)
struct PresetSpec {
  std::string name = "smooth_bump";
  double amplitude = 0.5;
  double width = 4.0;
  double center_x = 0.0;
  double center_y = 0.0;
  int twist_x = 1;
  int twist_y = 2;
  int k = 1;
  int ky = 0;
  double eta = 1.0;
  double c = 1.0;
  double theta0 = 2.5;
  std::uint64_t seed = 1;
  int kmax = 4;
  std::string path;
};

/// Parses a preset object such as {"preset": "single_mode", "k": 1}. Unknown
/// keys raise ConfigError; context prefixes the key in messages.
PresetSpec parse_preset(const std::string& json_text, std::uint64_t default_seed = 1,
                        const std::string& context = "data");

/// Chart coordinate (or MSM component) for a preset.
ComplexField preset_field(const PresetSpec& p, const Grid2D& g);
/// Map for a preset; chart presets go through the stereographic chart.
MapField preset_map(const PresetSpec& p, const Grid2D& g, TargetSign t);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
};

struct RunResult {
  std::string output_dir;
  /// Artifact file names relative to output_dir, in write order.
  std::vector<std::string> artifacts;
  /// JSON object with the scalar results of every experiment.
  std::string summary;
};

/// Validates a whole config and returns the experiment kinds in order.
std::vector<std::string> validate_config(const std::string& json_text, const RunOverrides& o = {});

/// Validates, runs every experiment, writes artifacts and manifest.sha256.
RunResult run_config(const std::string& json_text, const RunOverrides& o = {});

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace msmlab
