#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/fft.hpp"
#include "core/snapshot.hpp"
#include "support.hpp"

using namespace msmlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("msmlab_test_experiment_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::map<std::string, std::string> manifest(const fs::path& dir) {
  std::map<std::string, std::string> m;
  std::istringstream in(slurp(dir / "manifest.sha256"));
  std::string hash, file;
  while (in >> hash >> file) m[file] = hash;
  return m;
}

std::string config(const fs::path& out, const std::string& experiments) {
  return R"({"version": 1, "seed": 3, "output_dir": ")" + out.string() + R"(", "experiments": [)" +
         experiments + "]}";
}

ErrorCode code_of(const std::string& text) {
  try {
    validate_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

std::string message_of(const std::string& text) {
  try {
    validate_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const char* kSmallRuns = R"(
  {"kind": "evolve_map", "grid": {"n": 16, "length": 12.566370614359172}, "t_final": 0.01, "frames": 2,
   "data": {"preset": "smooth_bump", "width": 1.0}},
  {"kind": "gauge_check", "grid": {"n": 16, "length": 25.132741228718345},
   "data": {"preset": "random_seeded", "kmax": 2, "amplitude": 0.3}},
  {"kind": "msm_run", "grid": {"n": 16, "length": 12.566370614359172}, "dt": 0.005, "t_final": 0.02,
   "scheme": "etd_rk4", "u1": {"preset": "single_mode", "k": 1, "amplitude": 0.1}, "u2": {"preset": "zero"}},
  {"kind": "ratio_suite", "n": 8, "nt": 16, "size": 2, "ensembles": ["white"]},
  {"kind": "multiplier_suite", "modulus": 4, "trials": 3, "restarts": 3},
  {"kind": "hasimoto_1d", "grid": {"n": 64, "length": 12.566370614359172}, "frames": 4, "soliton_n": 256}
)";

}  // namespace

TEST_CASE("empty experiment list succeeds with an empty manifest") {
  const fs::path out = scratch("empty");
  const RunResult r = run_config(config(out, ""));
  CHECK(r.artifacts.empty());
  CHECK(fs::exists(out / "manifest.sha256"));
  CHECK(slurp(out / "manifest.sha256").empty());
  fs::remove_all(out);
}

TEST_CASE("config errors name the offending key") {
  const std::string base = R"({"version": 1, "experiments": [{"kind": "msm_run", )";
  CHECK(code_of(R"({"version": 1, "colour": 2})") == ErrorCode::ConfigError);
  CHECK(message_of(R"({"version": 1, "colour": 2})").find("'colour'") != std::string::npos);
  CHECK(message_of(base + R"("grid": {"n": 64, "m": 1}}]})").find("'experiments[0].grid.m'") != std::string::npos);
  CHECK(message_of(base + R"("u1": {"preset": "zero", "k": 1}}]})").find("'experiments[0].u1.k'") !=
        std::string::npos);
  CHECK(message_of(base + R"("grid": {"n": 48}}]})").find("'experiments[0].grid.n'") != std::string::npos);
  CHECK(message_of(base + R"("dt": -1}]})").find("'experiments[0].dt'") != std::string::npos);
  CHECK(message_of(base + R"("scheme": "euler"}]})").find("'experiments[0].scheme'") != std::string::npos);
  CHECK(message_of(R"({"version": 1, "experiments": [{"kind": "fly"}]})").find("'experiments[0].kind'") !=
        std::string::npos);
  CHECK(message_of(R"({"experiments": []})").find("'version'") != std::string::npos);
  CHECK(message_of(R"({"version": 2})").find("'version'") != std::string::npos);
  CHECK(code_of("{not json") == ErrorCode::ConfigError);
  CHECK(message_of(R"({"version": 1, "experiments": [{"kind": "msm_run", "name": "a"}, {"kind": "msm_run", "name": "a"}]})")
            .find("duplicate") != std::string::npos);
  CHECK(code_of(R"({"version": 1, "experiments": [{"kind": "multiplier_suite", "k": 4, "family": "random", "modulus": 101}]})") ==
        ErrorCode::TooLarge);
}

TEST_CASE("validation happens before any compute") {
  const fs::path out = scratch("invalid");
  const std::string text = config(out, R"({"kind": "msm_oracle"}, {"kind": "msm_run", "bogus": 1})");
  CHECK_THROWS_AS(run_config(text), Error);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("presets") {
  const Grid2D g(16, 2.0 * msmtest::pi);
  SUBCASE("zero") {
    const ComplexField z = preset_field(parse_preset(R"({"preset": "zero"})"), g);
    CHECK(max_abs(z) == 0.0);
  }
  SUBCASE("single mode has one Fourier coefficient") {
    const ComplexField f = preset_field(parse_preset(R"({"preset": "single_mode", "k": 1})"), g);
    const Spectrum s = forward_fft(f);
    int nonzero = 0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        if (std::abs(s.at(i, j)) > 1e-12) {
          ++nonzero;
          CHECK(g.mode(0, i) == 1);
          CHECK(g.mode(1, j) == 0);
        }
    CHECK(nonzero == 1);
  }
  SUBCASE("soliton profile") {
    const Grid2D line = Grid2D::line(128, 30.0);
    const ComplexField u = preset_field(parse_preset(R"({"preset": "soliton_1d", "eta": 1})"), line);
    for (int i = 0; i < line.nx(); ++i) {
      const double x = line.coordinate(0, i);
      CHECK(std::abs(u.at(i, 0) - std::sqrt(2.0) / std::cosh(x)) < 1e-14);
    }
  }
  SUBCASE("random_seeded follows the seed") {
    const auto a = preset_field(parse_preset(R"({"preset": "random_seeded"})", 5), g);
    const auto b = preset_field(parse_preset(R"({"preset": "random_seeded", "seed": 5})", 9), g);
    const auto c = preset_field(parse_preset(R"({"preset": "random_seeded"})", 6), g);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
  }
  SUBCASE("near_north_pole is a map") {
    const PresetSpec p = parse_preset(R"({"preset": "near_north_pole", "theta0": 1.0})");
    CHECK_THROWS_AS(preset_field(p, g), Error);
    CHECK(constraint_error(preset_map(p, g, TargetSign::Sphere)) < 1e-12);
  }
  CHECK_THROWS_AS(parse_preset(R"({"preset": "plaid"})"), Error);
}

TEST_CASE("oracle ladder residual decreases down the CSV") {
  const fs::path out = scratch("oracle");
  run_config(config(out, R"({"kind": "msm_oracle", "name": "ladder", "data": {"preset": "smooth_bump"},
                             "n": 64, "dt": 1e-3})"));
  std::istringstream in(slurp(out / "ladder.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "rung,n,dt,residual");
  std::vector<double> res;
  while (std::getline(in, line)) res.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  REQUIRE(res.size() == 3);
  CHECK(res[1] < res[0]);
  CHECK(res[2] < res[1]);
  fs::remove_all(out);
}

TEST_CASE("every kind runs; outputs are deterministic and fully listed") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const RunResult ra = run_config(config(a, kSmallRuns));
  const RunResult rb = run_config(config(b, kSmallRuns));
  CHECK(ra.summary == rb.summary);
  const auto ma = manifest(a), mb = manifest(b);
  CHECK(ma == mb);
  CHECK(ma.size() == ra.artifacts.size());
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    if (name == "manifest.sha256") continue;
    ++files;
    REQUIRE(ma.count(name) == 1);
    CHECK(ma.at(name) == sha256_hex(slurp(entry.path())));
    CHECK(slurp(entry.path()) == slurp(b / name));
  }
  CHECK(files == ma.size());
  CHECK(ma.count("05_hasimoto_1d.csv") == 1);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("seed override changes seeded outputs") {
  const fs::path a = scratch("seed_a"), b = scratch("seed_b");
  const std::string runs = R"({"kind": "multiplier_suite", "name": "m", "modulus": 4, "trials": 2, "restarts": 2})";
  run_config(config(a, runs));
  RunOverrides o;
  o.seed = 99;
  o.output_dir = b.string();
  const RunResult r = run_config(config(a, runs), o);
  CHECK(r.output_dir == b.string());
  CHECK(slurp(a / "m.csv") != slurp(b / "m.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("snapshot preset reads data written by a run") {
  const fs::path out = scratch("snap");
  run_config(config(out, R"({"kind": "msm_run", "name": "a", "grid": {"n": 16}, "dt": 0.01, "t_final": 0.02})"));
  const Grid2D g(16, 16.0 * msmtest::pi);
  const Snapshot s = read_bundle((out / "a_final.msmg").string())[0].snapshot;
  write_snapshot((out / "u1.msmf").string(), s);
  const ComplexField f = preset_field(parse_preset(R"({"preset": "snapshot", "path": ")" + (out / "u1.msmf").string() + "\"}"), g);
  CHECK(f.values == s.as_complex().values);
  CHECK_THROWS_AS(preset_field(parse_preset(R"({"preset": "snapshot", "path": ")" + (out / "u1.msmf").string() + "\"}"),
                               Grid2D(32, 1.0)),
                  Error);
  CHECK_THROWS_AS(parse_preset(R"({"preset": "snapshot"})"), Error);
  fs::remove_all(out);
}
