#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "core/error.hpp"
#include "core/gauge.hpp"
#include "core/presets.hpp"
#include "core/snapshot.hpp"
#include "core/spectral.hpp"
#include "support.hpp"

using namespace msmlab;
using msmtest::max_diff;
using msmtest::pi;

namespace {

ComplexField bump_data(int n, double amplitude = 0.5) {
  BumpParams p;
  p.amplitude = amplitude;
  p.width = 4.0;
  return smooth_bump(Grid2D(n, 16.0 * pi), p);
}

}  // namespace

TEST_CASE("hodge gauge makes the connection divergence free") {
  for (TargetSign t : {TargetSign::Sphere, TargetSign::Hyperbolic}) {
    const GaugeState gs = build_gauge_state(bump_data(64, 0.3), t);
    CHECK(divergence_norm(gs) < 1e-9 * l2_norm(gs.a1));
    CHECK(hodge_residual(gs.s, gs.psi, t) < 1e-12);
    CHECK(std::abs(mean(gs.psi)) < 1e-12);
  }
}

TEST_CASE("consistency residuals are small and shrink with resolution") {
  // The hyperbolic metric factor grows quickly with |s|; smaller data keeps
  // the n = 64 grid resolved.
  for (TargetSign t : {TargetSign::Sphere, TargetSign::Hyperbolic}) {
    const double amp = t == TargetSign::Sphere ? 0.5 : 0.3;
    const ConsistencyReport r64 = verify_consistency(build_gauge_state(bump_data(64, amp), t));
    const ConsistencyReport r128 = verify_consistency(build_gauge_state(bump_data(128, amp), t));
    for (double v : {r64.k5, r64.k7, r64.k8}) CHECK(v < 1e-8);
    CHECK(r128.k5 < r64.k5 / 10.0);
    CHECK(r128.k7 < r64.k7 / 10.0);
    CHECK(r128.k8 < r64.k8 / 10.0);
  }
}

TEST_CASE("wrong frame rotation breaks the compatibility condition") {
  GaugeState gs = build_gauge_state(bump_data(64), TargetSign::Sphere);
  for (std::size_t p = 0; p < gs.u1.size(); ++p) {
    const cplx rot = std::polar(1.0, -2.0 * gs.psi[p]);
    gs.u1[p] *= rot;
    gs.u2[p] *= rot;
  }
  CHECK(verify_consistency(gs).k7 > 1e-3);
}

TEST_CASE("curvature identity fails with the opposite sign") {
  const GaugeState gs = build_gauge_state(bump_data(64), TargetSign::Sphere);
  ConsistencyOptions wrong;
  wrong.curvature = -4.0;
  CHECK(verify_consistency(gs, wrong).k8 > 1e-3);
  wrong.curvature = 2.0;
  CHECK(verify_consistency(gs, wrong).k8 > 1e-3);
}

TEST_CASE("constant phase shift rotates u and leaves the connection") {
  const GaugeState gs = build_gauge_state(bump_data(32), TargetSign::Sphere);
  const GaugeState sh = shift_phase(gs, 0.7);
  CHECK(max_diff(sh.u1, std::polar(1.0, 0.7) * gs.u1) < 1e-13);
  CHECK(max_diff(sh.u2, std::polar(1.0, 0.7) * gs.u2) < 1e-13);
  CHECK(max_diff(sh.a1, gs.a1) < 1e-13);
  CHECK(max_diff(sh.beta, gs.beta) < 1e-13);
  CHECK(max_diff(sh.a0, gs.a0) < 1e-12);
}

TEST_CASE("b fields reduce to gradients for small maps") {
  const Grid2D g(32, 2.0 * pi);
  const ComplexField f = msmtest::smooth_complex(g, 7, 3);
  double prev = 0.0;
  for (double eps : {1e-2, 5e-3, 2.5e-3}) {
    const ComplexField s = eps * f;
    const auto b = b_fields(s, TargetSign::Sphere);
    const double err = max_abs(b[0] - derivative(s, 0)) / eps;
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.02));
    prev = err;
  }
}

TEST_CASE("potentials agree with their Poisson equations") {
  const GaugeState gs = build_gauge_state(bump_data(64), TargetSign::Sphere);
  const auto c = MsmCoefficients::derived(TargetSign::Sphere);
  RealField src = c.beta * im_product(gs.u1, gs.u2);
  const double m = mean(src);
  for (auto& v : src.values) v -= m;
  CHECK(max_diff(laplacian(gs.beta), src) < 1e-10 * (max_abs(src) + 1e-30));
  CHECK(max_diff(gs.kappa12, -1.0 * gs.beta) == 0.0);
  CHECK(max_diff(compute_a0(gs, c), gs.a0) == 0.0);
}

TEST_CASE("one dimensional gauge transform") {
  const Grid2D line = Grid2D::line(128, 4.0 * pi);
  const ComplexField s = msmtest::smooth_complex(line, 11, 4, 0.3);
  const Hasimoto1D hz = hasimoto_1d(s, TargetSign::Sphere);
  const ComplexField sx = derivative(s, 0);
  for (std::size_t p = 0; p < s.size(); ++p) {
    const double h = 1.0 / (1.0 + std::norm(s[p]));
    CHECK(std::abs(hz.u[p]) == doctest::Approx(h * std::abs(sx[p])).epsilon(1e-12));
  }
  RealField rhs(line);
  for (std::size_t p = 0; p < s.size(); ++p) {
    const double h = 1.0 / (1.0 + std::norm(s[p]));
    rhs[p] = 2.0 * h * (s[p] * std::conj(sx[p])).imag() - hz.a_mean;
  }
  CHECK(max_diff(derivative(hz.psi, 0), rhs) < 1e-11);
  CHECK_THROWS_AS(hasimoto_1d(bump_data(32), TargetSign::Sphere), Error);
}

TEST_CASE("gauge bundle round trip") {
  const GaugeState gs = build_gauge_state(bump_data(16), TargetSign::Sphere);
  const auto path = std::filesystem::temp_directory_path() / "msmlab_gauge_bundle.bin";
  write_gauge_bundle(path.string(), gs);
  const auto recs = read_bundle(path.string());
  std::filesystem::remove(path);
  REQUIRE(recs.size() == 8);
  CHECK(recs[0].name == "u1");
  CHECK(max_diff(recs[0].snapshot.as_complex(), gs.u1) == 0.0);
  CHECK(recs[6].name == "beta");
  CHECK(max_diff(recs[6].snapshot.as_real(), gs.beta) == 0.0);
}
