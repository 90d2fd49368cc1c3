// msmlab command-line front end. Every subcommand turns its flags into a
// one-experiment config (or reads --config) and hands it to the C API.

#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "msmlab/msmlab.h"

using json = nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Sets a dotted key path in a JSON object, creating intermediate objects.
void set_path(json& j, const std::string& path, const json& value) {
  json* at = &j;
  std::size_t start = 0;
  for (std::size_t dot; (dot = path.find('.', start)) != std::string::npos; start = dot + 1)
    at = &(*at)[path.substr(start, dot - start)];
  (*at)[path.substr(start)] = value;
}

json parse_json_flag(const std::string& flag, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    throw CLI::ValidationError(flag, "expected a JSON object");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, sep);)
    if (!part.empty()) out.push_back(part);
  return out;
}

struct Command {
  CLI::App* app = nullptr;
  std::string kind;
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::function<void(json&)>> apply;
  std::vector<std::string> flags;

  template <class T>
  void option(const std::string& name, const std::string& key, const std::string& help) {
    auto v = std::make_shared<std::optional<T>>();
    app->add_option(name, *v, help);
    flags.push_back(name);
    apply.push_back([v, key](json& e) {
      if (*v) set_path(e, key, **v);
    });
  }

  void json_option(const std::string& name, const std::string& key, const std::string& help) {
    auto v = std::make_shared<std::optional<std::string>>();
    app->add_option(name, *v, help);
    flags.push_back(name);
    apply.push_back([v, key, name](json& e) {
      if (*v) set_path(e, key, parse_json_flag(name, **v));
    });
  }

  void preset_options(const std::string& key) {
    auto name = std::make_shared<std::optional<std::string>>();
    auto data = std::make_shared<std::optional<std::string>>();
    app->add_option("--preset", *name, "initial data preset name");
    app->add_option("--data", *data, "initial data as a JSON preset object");
    flags.push_back("--preset");
    flags.push_back("--data");
    apply.push_back([name, data, key](json& e) {
      if (!*name && !*data) return;
      json d = *data ? parse_json_flag("--data", **data) : json::object();
      if (*name) d["preset"] = **name;
      e[key] = d;
    });
  }

  void grid_options(const std::string& n_help = "grid points per axis") {
    option<int>("--n", "grid.n", n_help);
    option<double>("--length", "grid.length", "period of the torus");
  }

  void target_option() { option<std::string>("--target", "target", "sphere or hyperbolic"); }
};

void common_options(Command& c) {
  c.app->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
  c.app->add_option("--seed", c.seed, "RNG seed (overrides the config)");
  c.app->add_option("--out", c.out, "output directory (overrides the config)");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int report_failure(msmlab_status s) {
  std::fprintf(stderr, "msmlab: %s: %s\n", msmlab_status_name(s), msmlab_last_error());
  return s == MSMLAB_CONFIG_ERROR ? kExitUsage : kExitFailure;
}

int execute(const Command& c) {
  std::string text;
  if (c.config) {
    for (const std::string& f : c.flags)
      if (c.app->count(f) > 0) {
        std::fprintf(stderr, "msmlab: %s cannot be combined with --config\n", f.c_str());
        return kExitUsage;
      }
    text = read_file(*c.config);
  } else {
    json e{{"kind", c.kind}};
    try {
      for (const auto& a : c.apply) a(e);
    } catch (const CLI::ValidationError& err) {
      std::fprintf(stderr, "msmlab: %s\n", err.what());
      return kExitUsage;
    }
    text = json{{"version", 1}, {"experiments", json::array({e})}}.dump();
  }

  msmlab_run_options opt{};
  if (c.out) opt.output_dir = c.out->c_str();
  if (c.seed) {
    opt.has_seed = 1;
    opt.seed = *c.seed;
  }

  msmlab_plan* plan = nullptr;
  if (msmlab_status s = msmlab_plan_parse(text.c_str(), &opt, &plan); s != MSMLAB_OK) return report_failure(s);
  bool matches = true;
  if (!c.kind.empty())
    for (std::size_t i = 0; i < msmlab_plan_size(plan); ++i)
      if (c.kind != msmlab_plan_kind(plan, i)) {
        std::fprintf(stderr, "msmlab: config experiment %zu is '%s', expected '%s'\n", i, msmlab_plan_kind(plan, i),
                     c.kind.c_str());
        matches = false;
      }
  msmlab_plan_free(plan);
  if (!matches) return kExitUsage;

  msmlab_run* run = nullptr;
  if (msmlab_status s = msmlab_run_config(text.c_str(), &opt, &run); s != MSMLAB_OK) return report_failure(s);
  std::printf("%s\n", msmlab_run_summary(run));
  std::fprintf(stderr, "msmlab: wrote %zu artifacts and manifest.sha256 to %s\n", msmlab_run_artifact_count(run),
               msmlab_run_output_dir(run));
  msmlab_run_free(run);
  return 0;
}

int write_preset(const std::string& preset, int n, double length, bool line, std::uint64_t seed,
                 const std::string& path) {
  msmlab_field* f = nullptr;
  if (msmlab_status s = msmlab_field_from_preset(preset.c_str(), n, length, line ? 1 : 0, seed, &f); s != MSMLAB_OK)
    return report_failure(s);
  const msmlab_status s = msmlab_field_write(f, path.c_str());
  msmlab_field_free(f);
  if (s != MSMLAB_OK) return report_failure(s);
  std::fprintf(stderr, "msmlab: wrote %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"msmlab: Schrodinger maps, their gauged derivative system and its space-time estimates"};
  app.set_version_flag("--version", std::string(msmlab_version()));
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Command>> commands;
  auto make = [&](const std::string& name, const std::string& kind, const std::string& help) -> Command& {
    auto c = std::make_unique<Command>();
    c->app = app.add_subcommand(name, help);
    c->kind = kind;
    common_options(*c);
    commands.push_back(std::move(c));
    return *commands.back();
  };

  {
    Command& c = make("evolve", "evolve_map", "evolve a map by the Landau-Lifshitz flow");
    c.grid_options();
    c.target_option();
    c.preset_options("data");
    c.option<double>("--t-final", "t_final", "final time");
    c.option<int>("--frames", "frames", "number of recorded frames");
    c.option<double>("--cfl", "cfl", "largest dt / dx^2 per substep");
  }
  {
    Command& c = make("gauge-check", "gauge_check", "build the Hodge gauge and check its identities");
    c.grid_options();
    c.target_option();
    c.preset_options("data");
    c.option<int>("--oversample", "oversample", "interpolation factor for the checks");
    c.option<double>("--curvature", "curvature", "curvature coefficient (times sigma)");
  }
  {
    Command& c = make("msm", "msm_run", "solve the gauged derivative system");
    c.grid_options();
    c.target_option();
    c.json_option("--u1", "u1", "first component as a JSON preset object");
    c.json_option("--u2", "u2", "second component as a JSON preset object");
    c.option<double>("--dt", "dt", "time step");
    c.option<double>("--t-final", "t_final", "final time");
    c.option<std::string>("--scheme", "scheme", "strang_split, etd_rk4 or picard_duhamel");
    c.option<std::string>("--coefficients", "coefficients", "derived or printed");
    c.option<bool>("--linear-only", "linear_only", "drop the nonlinear terms");
    c.option<int>("--record-every", "record_every", "CSV row every k steps");
  }
  {
    Command& c = make("oracle", "msm_oracle", "residual of gauge-transformed map trajectories over a ladder");
    c.option<int>("--n", "n", "grid points of the finest rung");
    c.option<double>("--dt", "dt", "time step of the finest rung");
    c.option<int>("--rungs", "rungs", "number of rungs");
    c.option<double>("--length", "length", "period of the torus");
    c.option<double>("--t-final", "t_final", "trajectory length");
    c.option<double>("--amplitude", "data.amplitude", "smooth_bump amplitude");
    c.option<double>("--width", "data.width", "smooth_bump width");
    c.target_option();
    c.option<std::string>("--coefficients", "coefficients", "derived or printed");
  }
  std::optional<std::string> ensembles, grids;
  {
    Command& c = make("ratios", "ratio_suite", "estimate ratio suites over random ensembles");
    c.option<int>("--n", "n", "spatial points per axis");
    c.option<int>("--nt", "nt", "time points");
    c.option<int>("--size", "size", "members per ensemble");
    c.option<double>("--s", "s", "Sobolev index");
    c.option<double>("--eps", "eps", "epsilon");
    c.app->add_option("--ensembles", ensembles, "comma list of white, paraboloid, separated");
    c.app->add_option("--grids", grids, "comma list of NxNT grids, e.g. 32x64,64x128");
    c.flags.push_back("--ensembles");
    c.flags.push_back("--grids");
    c.apply.push_back([&](json& e) {
      if (ensembles) e["ensembles"] = split(*ensembles, ',');
      if (grids) {
        json g = json::array();
        for (const std::string& s : split(*grids, ',')) {
          const auto parts = split(s, 'x');
          try {
            if (parts.size() != 2) throw std::invalid_argument(s);
            g.push_back({std::stoi(parts[0]), std::stoi(parts[1])});
          } catch (const std::exception&) {
            throw CLI::ValidationError("--grids", "expected NxNT, got '" + s + "'");
          }
        }
        e["grids"] = g;
      }
    });
  }
  {
    Command& c = make("multipliers", "multiplier_suite", "bracket [k, Z] multiplier norms");
    c.option<std::string>("--family", "family", "indicator, random or two_point");
    c.option<int>("--k", "k", "number of inputs");
    c.option<int>("--modulus", "modulus", "N in Z = (Z_N)^d");
    c.option<int>("--dim", "dim", "d in Z = (Z_N)^d");
    c.option<int>("--trials", "trials", "number of random multipliers");
    c.option<double>("--density", "density", "set density for indicator multipliers");
    c.option<int>("--restarts", "restarts", "restarts of the lower-bound search");
  }
  {
    Command& c = make("hasimoto", "hasimoto_1d", "one-dimensional gauge transform and NLS fit");
    c.grid_options();
    c.target_option();
    c.preset_options("data");
    c.option<double>("--dt", "dt", "frame spacing");
    c.option<int>("--frames", "frames", "number of frames");
    c.option<double>("--eta", "eta", "soliton parameter");
  }
  {
    Command& c = make("run", "", "run every experiment of a config file");
    c.app->get_option("--config")->required();
  }

  CLI::App* preset = app.add_subcommand("preset", "write a preset field as a snapshot file");
  std::string preset_json = R"({"preset": "smooth_bump"})", preset_out;
  int preset_n = 64;
  double preset_length = 16.0 * 3.141592653589793;
  bool preset_line = false;
  std::uint64_t preset_seed = 1;
  preset->add_option("--data", preset_json, "preset as a JSON object");
  preset->add_option("--n", preset_n, "grid points per axis");
  preset->add_option("--length", preset_length, "period");
  preset->add_flag("--line", preset_line, "one-dimensional grid");
  preset->add_option("--seed", preset_seed, "seed for random_seeded");
  preset->add_option("--out", preset_out, "snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  if (preset->parsed()) return write_preset(preset_json, preset_n, preset_length, preset_line, preset_seed, preset_out);
  for (const auto& c : commands)
    if (c->app->parsed()) return execute(*c);
  return kExitUsage;
}
