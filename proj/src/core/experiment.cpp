#include "core/experiment.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "core/error.hpp"
#include "core/gauge.hpp"
#include "core/msm.hpp"
#include "core/multiplier.hpp"
#include "core/oracle.hpp"
#include "core/presets.hpp"
#include "core/snapshot.hpp"
#include "core/studies.hpp"
#include "core/xsb.hpp"

namespace msmlab {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kConfigVersion = 1;
constexpr double kPi = std::numbers::pi;

[[noreturn]] void config_fail(const std::string& key, const std::string& what) {
  fail(ErrorCode::ConfigError, "config key '" + key + "': " + what);
}

// Object reader that remembers which keys were consumed.
class Obj {
 public:
  Obj(const json& j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
    if (!j_.is_object()) config_fail(ctx_, "expected an object");
  }

  std::string path(const std::string& key) const { return ctx_.empty() ? key : ctx_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_number()) config_fail(path(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) config_fail(path(key), "must be finite");
    return x;
  }

  double positive(const std::string& key, double def) {
    const double x = number(key, def);
    if (!(x > 0.0)) config_fail(path(key), "must be positive");
    return x;
  }

  int integer(const std::string& key, int def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_number_integer()) config_fail(path(key), "expected an integer");
    const long long x = v.get<long long>();
    if (x < -1000000000LL || x > 1000000000LL) config_fail(path(key), "out of range");
    return static_cast<int>(x);
  }

  int integer_in(const std::string& key, int def, int lo, int hi) {
    const int x = integer(key, def);
    if (x < lo || x > hi)
      config_fail(path(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }

  std::uint64_t seed(const std::string& key, std::uint64_t def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_number_unsigned()) config_fail(path(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_boolean()) config_fail(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_string()) config_fail(path(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) config_fail(path(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string ctx_;
  std::set<std::string> used_;
};

int grid_points(Obj& o, const std::string& key, int def) {
  const int n = o.integer(key, def);
  if (n < 8 || n > 4096 || !is_power_of_two(n)) config_fail(o.path(key), "must be a power of two in [8, 4096]");
  return n;
}

TargetSign parse_target(Obj& o) {
  const std::string t = o.string("target", "sphere");
  if (t == "sphere") return TargetSign::Sphere;
  if (t == "hyperbolic") return TargetSign::Hyperbolic;
  config_fail(o.path("target"), "expected 'sphere' or 'hyperbolic'");
}

const char* target_name(TargetSign t) { return t == TargetSign::Sphere ? "sphere" : "hyperbolic"; }

MsmCoefficients parse_coefficients(Obj& o, TargetSign t) {
  const std::string c = o.string("coefficients", "derived");
  if (c == "derived") return MsmCoefficients::derived(t);
  if (c == "printed") return MsmCoefficients::printed(t);
  config_fail(o.path("coefficients"), "expected 'derived' or 'printed'");
}

PresetSpec read_preset(const json& j, std::uint64_t default_seed, const std::string& ctx) {
  Obj o(j, ctx);
  PresetSpec p;
  p.seed = default_seed;
  p.name = o.string("preset", "smooth_bump");
  if (p.name == "zero") {
  } else if (p.name == "single_mode") {
    p.k = o.integer_in("k", 1, -1024, 1024);
    p.ky = o.integer_in("ky", 0, -1024, 1024);
    p.amplitude = o.number("amplitude", 1.0);
  } else if (p.name == "smooth_bump") {
    p.amplitude = o.number("amplitude", 0.5);
    p.width = o.positive("width", 4.0);
    p.center_x = o.number("center_x", 0.0);
    p.center_y = o.number("center_y", 0.0);
    p.twist_x = o.integer_in("twist_x", 1, -1024, 1024);
    p.twist_y = o.integer_in("twist_y", 2, -1024, 1024);
  } else if (p.name == "soliton_1d") {
    p.eta = o.positive("eta", 1.0);
    p.c = o.positive("c", 1.0);
  } else if (p.name == "near_north_pole") {
    p.theta0 = o.positive("theta0", 2.5);
    p.width = o.positive("width", 4.0);
  } else if (p.name == "random_seeded") {
    p.seed = o.seed("seed", default_seed);
    p.kmax = o.integer_in("kmax", 4, 0, 1024);
    p.amplitude = o.number("amplitude", 0.5);
  } else if (p.name == "snapshot") {
    p.path = o.string("path", "");
    if (p.path.empty()) config_fail(o.path("path"), "missing");
  } else {
    config_fail(o.path("preset"), "unknown preset '" + p.name + "'");
  }
  o.finish();
  return p;
}

// ---- experiment specs -------------------------------------------------

struct GridSpec {
  int n = 64;
  double length = 16.0 * kPi;
};

GridSpec read_grid(Obj& parent, GridSpec def) {
  if (!parent.has("grid")) return def;
  Obj o(parent.raw("grid"), parent.path("grid"));
  def.n = grid_points(o, "n", def.n);
  def.length = o.positive("length", def.length);
  o.finish();
  return def;
}

PresetSpec read_data(Obj& parent, const std::string& key, std::uint64_t seed, PresetSpec def) {
  if (!parent.has(key)) return def;
  return read_preset(parent.raw(key), seed, parent.path(key));
}

struct EvolveMapSpec {
  GridSpec grid;
  TargetSign target = TargetSign::Sphere;
  PresetSpec data;
  double t_final = 0.05;
  int frames = 10;
  StepOptions step;
};

struct GaugeCheckSpec {
  GridSpec grid;
  TargetSign target = TargetSign::Sphere;
  PresetSpec data;
  ConsistencyOptions consistency;
};

struct MsmRunSpec {
  GridSpec grid;
  TargetSign target = TargetSign::Sphere;
  PresetSpec u1, u2;
  SolverConfig solver;
  int record_every = 1;
};

struct MsmOracleSpec {
  OracleSetup setup;
  MsmCoefficients coefficients = MsmCoefficients::derived(TargetSign::Sphere);
};

struct RatioSuiteSpec {
  std::vector<EnsembleKind> kinds{EnsembleKind::White, EnsembleKind::Paraboloid, EnsembleKind::Separated};
  std::vector<std::pair<int, int>> grids{{32, 64}};
  EnsembleSpec base;
  double s = 1.0;
  double eps = 0.01;
};

enum class MultiplierFamily { Indicator, Random, TwoPoint };

struct MultiplierSuiteSpec {
  MultiplierFamily family = MultiplierFamily::Indicator;
  int k = 3;
  int modulus = 8;
  int dim = 1;
  int trials = 20;
  double density = 0.5;
  std::uint64_t seed = 1;
  LowerBoundOptions lower;
};

struct HasimotoSpec {
  GridSpec grid{128, 4.0 * kPi};
  TargetSign target = TargetSign::Sphere;
  PresetSpec data;
  double dt = 1e-3;
  int frames = 20;
  int soliton_n = 512;
  double soliton_length = 60.0;
  double eta = 1.0;
};

using ExperimentSpec = std::variant<EvolveMapSpec, GaugeCheckSpec, MsmRunSpec, MsmOracleSpec, RatioSuiteSpec,
                                    MultiplierSuiteSpec, HasimotoSpec>;

struct Experiment {
  std::string kind;
  std::string name;
  ExperimentSpec spec;
};

struct Plan {
  std::string output_dir;
  std::uint64_t seed = 1;
  std::vector<Experiment> experiments;
};

PresetSpec default_bump() { return PresetSpec{}; }

void require_chart_preset(const PresetSpec& p, const std::string& key) {
  if (p.name == "near_north_pole") config_fail(key, "preset 'near_north_pole' only yields a map");
  if (p.name == "soliton_1d") config_fail(key, "preset 'soliton_1d' needs a line grid");
}

EvolveMapSpec read_evolve_map(Obj& o, std::uint64_t seed) {
  EvolveMapSpec s;
  s.grid = read_grid(o, s.grid);
  s.target = parse_target(o);
  s.data = read_data(o, "data", seed, default_bump());
  if (s.data.name == "soliton_1d") config_fail(o.path("data"), "preset 'soliton_1d' needs a line grid");
  if (s.data.name == "near_north_pole" && s.target != TargetSign::Sphere)
    config_fail(o.path("data"), "preset 'near_north_pole' needs the sphere target");
  s.t_final = o.positive("t_final", 0.05);
  s.frames = o.integer_in("frames", 10, 1, 100000);
  s.step.cfl = o.positive("cfl", s.step.cfl);
  return s;
}

GaugeCheckSpec read_gauge_check(Obj& o, std::uint64_t seed) {
  GaugeCheckSpec s;
  s.grid = read_grid(o, s.grid);
  s.target = parse_target(o);
  s.data = read_data(o, "data", seed, default_bump());
  if (s.data.name == "soliton_1d") config_fail(o.path("data"), "preset 'soliton_1d' needs a line grid");
  if (s.data.name == "near_north_pole" && s.target != TargetSign::Sphere)
    config_fail(o.path("data"), "preset 'near_north_pole' needs the sphere target");
  s.consistency.oversample = o.integer_in("oversample", 2, 1, 8);
  s.consistency.curvature = o.number("curvature", 4.0);
  return s;
}

MsmRunSpec read_msm_run(Obj& o, std::uint64_t seed) {
  MsmRunSpec s;
  s.grid = read_grid(o, s.grid);
  s.target = parse_target(o);
  PresetSpec second = default_bump();
  second.twist_x = 0;
  second.twist_y = 1;
  s.u1 = read_data(o, "u1", seed, default_bump());
  s.u2 = read_data(o, "u2", seed + 1, second);
  require_chart_preset(s.u1, o.path("u1"));
  require_chart_preset(s.u2, o.path("u2"));
  s.solver.dt = o.positive("dt", 1e-3);
  s.solver.t_final = o.positive("t_final", 0.05);
  const std::string scheme = o.string("scheme", "strang_split");
  try {
    s.solver.scheme = parse_scheme(scheme);
  } catch (const Error&) {
    config_fail(o.path("scheme"), "unknown scheme '" + scheme + "'");
  }
  s.solver.coefficients = parse_coefficients(o, s.target);
  s.solver.linear_only = o.boolean("linear_only", false);
  s.solver.dealias = o.boolean("dealias", true);
  s.solver.picard_max_iters = o.integer_in("picard_max_iters", 30, 1, 10000);
  s.solver.picard_tol = o.positive("picard_tol", 1e-12);
  s.record_every = o.integer_in("record_every", 1, 1, 1000000);
  return s;
}

MsmOracleSpec read_msm_oracle(Obj& o) {
  MsmOracleSpec s;
  OracleSetup& u = s.setup;
  if (o.has("data")) {
    Obj d(o.raw("data"), o.path("data"));
    const std::string preset = d.string("preset", "smooth_bump");
    if (preset != "smooth_bump") config_fail(d.path("preset"), "the oracle ladder uses 'smooth_bump'");
    u.amplitude = d.number("amplitude", u.amplitude);
    u.width = d.positive("width", u.width);
    d.finish();
  }
  u.length = o.positive("length", u.length);
  u.t_final = o.positive("t_final", u.t_final);
  u.target = parse_target(o);
  s.coefficients = parse_coefficients(o, u.target);
  if (o.has("ladder")) {
    if (o.has("n") || o.has("dt") || o.has("rungs"))
      config_fail(o.path("ladder"), "give either 'ladder' or 'n'/'dt'/'rungs'");
    const json& l = o.raw("ladder");
    if (!l.is_array() || l.empty()) config_fail(o.path("ladder"), "expected a non-empty list of [n, dt]");
    u.ladder.clear();
    for (std::size_t k = 0; k < l.size(); ++k) {
      const std::string key = o.path("ladder") + "[" + std::to_string(k) + "]";
      const json& r = l[k];
      if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number())
        config_fail(key, "expected [n, dt]");
      const int n = r[0].get<int>();
      const double dt = r[1].get<double>();
      if (n < 8 || n > 4096 || !is_power_of_two(n)) config_fail(key, "n must be a power of two in [8, 4096]");
      if (!(dt > 0.0)) config_fail(key, "dt must be positive");
      u.ladder.emplace_back(n, dt);
    }
  } else if (o.has("n") || o.has("dt") || o.has("rungs")) {
    // n and dt name the finest rung; coarser rungs halve n and double dt.
    const int n = grid_points(o, "n", 128);
    const double dt = o.positive("dt", 1e-3);
    const int rungs = o.integer_in("rungs", 3, 1, 8);
    if ((n >> (rungs - 1)) < 8) config_fail(o.path("rungs"), "coarsest rung would have fewer than 8 points");
    u.ladder.clear();
    for (int r = rungs - 1; r >= 0; --r) u.ladder.emplace_back(n >> r, dt * std::ldexp(1.0, r));
  }
  return s;
}

RatioSuiteSpec read_ratio_suite(Obj& o, std::uint64_t seed) {
  RatioSuiteSpec s;
  if (o.has("ensembles")) {
    const json& e = o.raw("ensembles");
    if (!e.is_array() || e.empty()) config_fail(o.path("ensembles"), "expected a non-empty list of names");
    s.kinds.clear();
    for (const json& v : e) {
      if (!v.is_string()) config_fail(o.path("ensembles"), "expected ensemble names");
      try {
        s.kinds.push_back(parse_ensemble_kind(v.get<std::string>()));
      } catch (const Error&) {
        config_fail(o.path("ensembles"), "unknown ensemble '" + v.get<std::string>() + "'");
      }
    }
  }
  if (o.has("grids")) {
    if (o.has("n") || o.has("nt")) config_fail(o.path("grids"), "give either 'grids' or 'n'/'nt'");
    const json& l = o.raw("grids");
    if (!l.is_array() || l.empty()) config_fail(o.path("grids"), "expected a non-empty list of [n, nt]");
    s.grids.clear();
    for (std::size_t k = 0; k < l.size(); ++k) {
      const std::string key = o.path("grids") + "[" + std::to_string(k) + "]";
      const json& r = l[k];
      if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
        config_fail(key, "expected [n, nt]");
      const int n = r[0].get<int>(), nt = r[1].get<int>();
      if (n < 8 || n > 512 || !is_power_of_two(n)) config_fail(key, "n must be a power of two in [8, 512]");
      if (nt < 8 || nt > 1024 || !is_power_of_two(nt)) config_fail(key, "nt must be a power of two in [8, 1024]");
      s.grids.emplace_back(n, nt);
    }
  } else {
    const int n = grid_points(o, "n", 32);
    const int nt = grid_points(o, "nt", 64);
    s.grids = {{n, nt}};
  }
  s.base.length = o.positive("length", s.base.length);
  s.base.t_window = o.positive("t_window", s.base.t_window);
  s.base.size = o.integer_in("size", 8, 1, 100000);
  s.base.seed = o.seed("seed", seed);
  s.eps = o.positive("eps", 0.01);
  s.s = o.number("s", 100.0 * s.eps);
  if (!(s.s > 5.0 * s.eps)) config_fail(o.path("s"), "must exceed 5 eps");
  return s;
}

MultiplierSuiteSpec read_multiplier_suite(Obj& o, std::uint64_t seed) {
  MultiplierSuiteSpec s;
  const std::string family = o.string("family", "indicator");
  if (family == "indicator") s.family = MultiplierFamily::Indicator;
  else if (family == "random") s.family = MultiplierFamily::Random;
  else if (family == "two_point") s.family = MultiplierFamily::TwoPoint;
  else config_fail(o.path("family"), "expected 'indicator', 'random' or 'two_point'");
  const int default_k = s.family == MultiplierFamily::TwoPoint ? 2 : 3;
  s.k = o.integer_in("k", default_k, 2, 8);
  if (s.family == MultiplierFamily::Indicator && s.k != 3) config_fail(o.path("k"), "indicator multipliers have k = 3");
  if (s.family == MultiplierFamily::TwoPoint && s.k != 2) config_fail(o.path("k"), "two_point multipliers have k = 2");
  s.modulus = o.integer_in("modulus", 8, 2, 1000000);
  s.dim = o.integer_in("dim", 1, 1, 8);
  s.trials = o.integer_in("trials", 20, 1, 100000);
  s.density = o.number("density", 0.5);
  if (!(s.density > 0.0 && s.density <= 1.0)) config_fail(o.path("density"), "must lie in (0, 1]");
  s.seed = o.seed("seed", seed);
  s.lower.restarts = o.integer_in("restarts", s.lower.restarts, 1, 100000);
  s.lower.max_sweeps = o.integer_in("max_sweeps", s.lower.max_sweeps, 1, 10000000);
  s.lower.tol = o.positive("tol", s.lower.tol);
  double points = 1.0;
  for (int j = 0; j < s.k - 1; ++j) points *= std::pow(static_cast<double>(s.modulus), s.dim);
  if (points > static_cast<double>(kMaxHyperplanePoints))
    fail(ErrorCode::TooLarge, "config key '" + o.path("modulus") + "': hyperplane has more than " +
                                  std::to_string(kMaxHyperplanePoints) + " points");
  return s;
}

HasimotoSpec read_hasimoto(Obj& o, std::uint64_t seed) {
  HasimotoSpec s;
  s.grid = read_grid(o, s.grid);
  s.target = parse_target(o);
  PresetSpec def = default_bump();
  def.width = 1.0;
  def.twist_y = 0;
  s.data = read_data(o, "data", seed, def);
  if (s.data.name == "near_north_pole") config_fail(o.path("data"), "preset 'near_north_pole' needs a square grid");
  s.dt = o.positive("dt", 1e-3);
  s.frames = o.integer_in("frames", 20, 2, 100000);
  s.soliton_n = grid_points(o, "soliton_n", 512);
  s.soliton_length = o.positive("soliton_length", 60.0);
  s.eta = o.positive("eta", 1.0);
  return s;
}

bool valid_name(const std::string& s) {
  if (s.empty() || s.size() > 64) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

Plan parse_plan(const std::string& text, const RunOverrides& ov) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  Obj top(root, "");
  Plan plan;
  if (!top.has("version")) config_fail("version", "missing");
  const int version = top.integer("version", 0);
  if (version != kConfigVersion) config_fail("version", "unsupported version " + std::to_string(version));
  plan.seed = top.seed("seed", 1);
  plan.output_dir = top.string("output_dir", "msmlab_out");
  if (ov.seed) plan.seed = *ov.seed;
  if (ov.output_dir) plan.output_dir = *ov.output_dir;
  if (plan.output_dir.empty()) config_fail("output_dir", "must not be empty");

  std::set<std::string> names;
  if (top.has("experiments")) {
    const json& list = top.raw("experiments");
    if (!list.is_array()) config_fail("experiments", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string ctx = "experiments[" + std::to_string(i) + "]";
      Obj o(list[i], ctx);
      Experiment e;
      if (!o.has("kind")) config_fail(o.path("kind"), "missing");
      e.kind = o.string("kind", "");
      char idx[8];
      std::snprintf(idx, sizeof idx, "%02zu", i);
      e.name = o.string("name", std::string(idx) + "_" + e.kind);
      if (!valid_name(e.name)) config_fail(o.path("name"), "use 1-64 characters from [A-Za-z0-9_-]");
      if (!names.insert(e.name).second) config_fail(o.path("name"), "duplicate name '" + e.name + "'");
      const std::uint64_t seed = o.seed("seed", plan.seed);
      if (e.kind == "evolve_map") e.spec = read_evolve_map(o, seed);
      else if (e.kind == "gauge_check") e.spec = read_gauge_check(o, seed);
      else if (e.kind == "msm_run") e.spec = read_msm_run(o, seed);
      else if (e.kind == "msm_oracle") e.spec = read_msm_oracle(o);
      else if (e.kind == "ratio_suite") e.spec = read_ratio_suite(o, seed);
      else if (e.kind == "multiplier_suite") e.spec = read_multiplier_suite(o, seed);
      else if (e.kind == "hasimoto_1d") e.spec = read_hasimoto(o, seed);
      else config_fail(o.path("kind"), "unknown experiment kind '" + e.kind + "'");
      o.finish();
      plan.experiments.push_back(std::move(e));
    }
  }
  top.finish();
  return plan;
}

// ---- output -----------------------------------------------------------

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

  fs::path path(const std::string& file) const { return dir_ / file; }

  void text(const std::string& file, const std::string& content) {
    std::ofstream f(path(file), std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) fail(ErrorCode::IoError, "cannot write " + path(file).string());
    added(file);
  }

  void added(const std::string& file) { files_.push_back(file); }
  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot read " + p.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

json run_evolve_map(const EvolveMapSpec& s, const std::string& name, Writer& w) {
  const Grid2D g(s.grid.n, s.grid.length);
  MapField m = preset_map(s.data, g, s.target);
  std::string csv = "t,energy,constraint_error\n";
  const double interval = s.t_final / s.frames;
  const double e0 = energy(m);
  csv += num(0.0) + "," + num(e0) + "," + num(constraint_error(m)) + "\n";
  double drift = 0.0;
  for (int f = 1; f <= s.frames; ++f) {
    m = evolve_map(m, interval, s.step);
    const double e = energy(m);
    drift = std::max(drift, e0 == 0.0 ? std::abs(e) : std::abs(e - e0) / e0);
    csv += num(f * interval) + "," + num(e) + "," + num(constraint_error(m)) + "\n";
  }
  w.text(name + ".csv", csv);
  write_snapshot(w.path(name + "_final.msmf").string(), make_snapshot(m.s));
  w.added(name + "_final.msmf");
  return {{"energy0", e0}, {"max_relative_energy_drift", drift}, {"final_constraint_error", constraint_error(m)}};
}

json run_gauge_check(const GaugeCheckSpec& s, const std::string& name, Writer& w) {
  const Grid2D g(s.grid.n, s.grid.length);
  const ComplexField chart = to_stereographic(preset_map(s.data, g, s.target));
  const GaugeState gs = build_gauge_state(chart, s.target);
  const ConsistencyReport r = verify_consistency(gs, s.consistency);
  const double hodge = hodge_residual(chart, gs.psi, s.target);
  const double div = divergence_norm(gs);
  w.text(name + ".csv", "n,length,k5,k7,k8,hodge_residual,divergence_norm\n" + std::to_string(s.grid.n) + "," +
                            num(s.grid.length) + "," + num(r.k5) + "," + num(r.k7) + "," + num(r.k8) + "," +
                            num(hodge) + "," + num(div) + "\n");
  write_gauge_bundle(w.path(name + ".msmg").string(), gs);
  w.added(name + ".msmg");
  return {{"k5", r.k5}, {"k7", r.k7}, {"k8", r.k8}, {"hodge_residual", hodge}, {"divergence_norm", div}};
}

json run_msm(const MsmRunSpec& s, const std::string& name, Writer& w) {
  const Grid2D g(s.grid.n, s.grid.length);
  const MsmState u0{preset_field(s.u1, g), preset_field(s.u2, g), 0.0, s.target};
  std::string csv = "t,mass,h1_norm\n";
  long long count = 0;
  const MsmState end = evolve(u0, s.solver, [&](const MsmState& st) {
    if (count++ % s.record_every == 0) csv += num(st.t) + "," + num(mass(st)) + "," + num(sobolev_norm(st, 1.0)) + "\n";
    return true;
  });
  if ((count - 1) % s.record_every != 0)
    csv += num(end.t) + "," + num(mass(end)) + "," + num(sobolev_norm(end, 1.0)) + "\n";
  w.text(name + ".csv", csv);
  write_bundle(w.path(name + "_final.msmg").string(), {{"u1", make_snapshot(end.u1)}, {"u2", make_snapshot(end.u2)}});
  w.added(name + "_final.msmg");
  const double m0 = mass(u0), m1 = mass(end);
  return {{"t_final", end.t},
          {"mass0", m0},
          {"relative_mass_drift", m0 == 0.0 ? std::abs(m1) : std::abs(m1 - m0) / m0},
          {"scheme", to_string(s.solver.scheme)}};
}

json run_oracle(const MsmOracleSpec& s, const std::string& name, Writer& w) {
  const OracleLadder l = run_oracle_ladder(s.setup, s.coefficients);
  std::string csv = "rung,n,dt,residual\n";
  for (std::size_t k = 0; k < l.rungs.size(); ++k)
    csv += std::to_string(k) + "," + std::to_string(l.rungs[k].n) + "," + num(l.rungs[k].dt) + "," +
           num(l.rungs[k].residual) + "\n";
  w.text(name + ".csv", csv);
  json res = json::array();
  for (const auto& r : l.rungs) res.push_back(r.residual);
  return {{"residuals", res}, {"reductions", l.reductions}, {"target", target_name(s.setup.target)}};
}

json run_ratios(const RatioSuiteSpec& s, const std::string& name, Writer& w) {
  std::vector<RatioRecord> all;
  double defect = 0.0;
  for (auto [n, nt] : s.grids)
    for (EnsembleKind kind : s.kinds) {
      EnsembleSpec e = s.base;
      e.n = n;
      e.nt = nt;
      e.kind = kind;
      const RatioSuiteReport r = run_ratio_suite(e, s.s, s.eps);
      defect = std::max(defect, r.max_null_form_defect);
      all.insert(all.end(), r.records.begin(), r.records.end());
    }
  w.text(name + ".csv", ratio_csv(all));
  return {{"records", all.size()}, {"max_null_form_defect", defect}};
}

json run_multipliers(const MultiplierSuiteSpec& s, const std::string& name, Writer& w) {
  std::mt19937_64 rng(s.seed);
  std::bernoulli_distribution coin(s.density);
  std::normal_distribution<double> nd;
  std::vector<MultiplierSpec> specs;
  std::vector<double> reference;
  MultiplierSpec group;
  group.modulus = s.modulus;
  group.dim = s.dim;
  const std::size_t z = static_cast<std::size_t>(group.order());
  for (int t = 0; t < s.trials; ++t) {
    if (s.family == MultiplierFamily::Indicator) {
      std::vector<bool> a(z), b(z);
      for (std::size_t i = 0; i < z; ++i) a[i] = coin(rng);
      for (std::size_t i = 0; i < z; ++i) b[i] = coin(rng);
      specs.push_back(indicator_multiplier(s.modulus, s.dim, a, b));
      reference.push_back(counting_bound(s.modulus, s.dim, a, b));
    } else {
      std::vector<std::complex<double>> table;
      specs.push_back(make_multiplier(s.k, s.modulus, s.dim, [&](const std::vector<int>&) {
        table.emplace_back(nd(rng), nd(rng));
        return table.back();
      }));
      double sup = 0.0;
      for (const auto& v : table) sup = std::max(sup, std::abs(v));
      reference.push_back(s.family == MultiplierFamily::TwoPoint ? sup : std::nan(""));
    }
  }
  LowerBoundOptions lo = s.lower;
  lo.seed = s.seed;
  const auto bounds = multiplier_norm_bounds(specs, lo);
  const char* ref_name = s.family == MultiplierFamily::Indicator ? "counting_bound" : "exact";
  std::string csv = std::string("trial,k,modulus,dim,lower,upper,") + ref_name + "\n";
  int violations = 0;
  for (std::size_t t = 0; t < bounds.size(); ++t) {
    if (bounds[t].lower > bounds[t].upper * (1.0 + 1e-12)) ++violations;
    csv += std::to_string(t) + "," + std::to_string(s.k) + "," + std::to_string(s.modulus) + "," +
           std::to_string(s.dim) + "," + num(bounds[t].lower) + "," + num(bounds[t].upper) + "," +
           (std::isnan(reference[t]) ? std::string() : num(reference[t])) + "\n";
  }
  w.text(name + ".csv", csv);
  return {{"trials", s.trials}, {"order_violations", violations}};
}

json run_hasimoto(const HasimotoSpec& s, const std::string& name, Writer& w) {
  const Grid2D line = Grid2D::line(s.grid.n, s.grid.length);
  const MapField m = from_stereographic(preset_field(s.data, line), s.target);
  const NlsFit fit = fit_hasimoto_nls(record_trajectory(m, s.dt, s.frames));
  const double c = 2.0 * sigma(s.target);
  const double sol = s.target == TargetSign::Sphere ? soliton_residual(s.soliton_n, s.soliton_length, s.eta, c)
                                                    : std::nan("");
  std::string csv = "check,c,residual\nfit," + num(fit.c) + "," + num(fit.residual) + "\n";
  if (!std::isnan(sol)) csv += "soliton," + num(c) + "," + num(sol) + "\n";
  w.text(name + ".csv", csv);
  json out{{"fitted_c", fit.c}, {"fit_residual", fit.residual}};
  if (!std::isnan(sol)) out["soliton_residual"] = sol;
  return out;
}

}  // namespace

PresetSpec parse_preset(const std::string& json_text, std::uint64_t default_seed, const std::string& context) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigError, std::string("preset is not valid JSON: ") + e.what());
  }
  return read_preset(j, default_seed, context);
}

ComplexField preset_field(const PresetSpec& p, const Grid2D& g) {
  if (p.name == "zero") return ComplexField(g);
  if (p.name == "single_mode") {
    require(!g.is_line() || p.ky == 0, "single_mode on a line grid takes ky = 0");
    return single_mode(g, p.k, p.ky, p.amplitude);
  }
  if (p.name == "smooth_bump")
    return smooth_bump(g, BumpParams{p.amplitude, p.width, p.center_x, p.center_y, p.twist_x,
                                     g.is_line() ? 0 : p.twist_y});
  if (p.name == "soliton_1d") {
    require(g.is_line(), "soliton_1d needs a line grid");
    return soliton_1d(g, p.eta, p.c);
  }
  if (p.name == "random_seeded") return random_seeded(g, p.seed, p.kmax, p.amplitude);
  if (p.name == "snapshot") {
    const Snapshot s = read_snapshot(p.path);
    if (!(s.grid == g)) fail(ErrorCode::ShapeMismatch, "snapshot " + p.path + " is on a different grid");
    if (s.type == SnapshotType::Vec3) fail(ErrorCode::InvalidArgument, "snapshot " + p.path + " holds a map");
    return s.type == SnapshotType::Real ? to_complex(s.as_real()) : s.as_complex();
  }
  if (p.name == "near_north_pole") fail(ErrorCode::InvalidArgument, "near_north_pole yields a map, not a field");
  fail(ErrorCode::InvalidArgument, "unknown preset '" + p.name + "'");
}

MapField preset_map(const PresetSpec& p, const Grid2D& g, TargetSign t) {
  if (p.name == "near_north_pole") {
    require(t == TargetSign::Sphere, "near_north_pole needs the sphere target");
    return near_north_pole(g, p.theta0, p.width);
  }
  if (p.name == "snapshot") {
    const Snapshot s = read_snapshot(p.path);
    if (s.type == SnapshotType::Vec3) {
      if (!(s.grid == g)) fail(ErrorCode::ShapeMismatch, "snapshot " + p.path + " is on a different grid");
      MapField m{s.as_vec3(), t};
      require(constraint_error(m) < 1e-8, "snapshot " + p.path + " does not lie on the target");
      return m;
    }
  }
  return from_stereographic(preset_field(p, g), t);
}

std::vector<std::string> validate_config(const std::string& json_text, const RunOverrides& o) {
  std::vector<std::string> kinds;
  for (const auto& e : parse_plan(json_text, o).experiments) kinds.push_back(e.kind);
  return kinds;
}

RunResult run_config(const std::string& json_text, const RunOverrides& o) {
  const Plan plan = parse_plan(json_text, o);
  const fs::path dir(plan.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(ErrorCode::IoError, "cannot create output directory " + dir.string());

  Writer w(dir);
  json summary{{"version", kConfigVersion}, {"seed", plan.seed}, {"experiments", json::array()}};
  for (const Experiment& e : plan.experiments) {
    json r;
    try {
      r = std::visit(
          [&](const auto& spec) -> json {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, EvolveMapSpec>) return run_evolve_map(spec, e.name, w);
            else if constexpr (std::is_same_v<T, GaugeCheckSpec>) return run_gauge_check(spec, e.name, w);
            else if constexpr (std::is_same_v<T, MsmRunSpec>) return run_msm(spec, e.name, w);
            else if constexpr (std::is_same_v<T, MsmOracleSpec>) return run_oracle(spec, e.name, w);
            else if constexpr (std::is_same_v<T, RatioSuiteSpec>) return run_ratios(spec, e.name, w);
            else if constexpr (std::is_same_v<T, MultiplierSuiteSpec>) return run_multipliers(spec, e.name, w);
            else return run_hasimoto(spec, e.name, w);
          },
          e.spec);
    } catch (const Error& err) {
      throw Error(err.code(), "experiment '" + e.name + "' (" + e.kind + "): " + err.what());
    }
    summary["experiments"].push_back({{"name", e.name}, {"kind", e.kind}, {"results", r}});
  }

  std::string manifest;
  for (const std::string& f : w.files()) manifest += sha256_hex(slurp(dir / f)) + "  " + f + "\n";
  std::ofstream mf(dir / "manifest.sha256", std::ios::binary | std::ios::trunc);
  mf << manifest;
  mf.close();
  if (!mf) fail(ErrorCode::IoError, "cannot write manifest in " + dir.string());

  RunResult out;
  out.output_dir = dir.string();
  out.artifacts = w.files();
  out.summary = summary.dump(2);
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::IoError, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

}  // namespace msmlab
