#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "core/error.hpp"
#include "core/xsb.hpp"
#include "support.hpp"

using namespace msmlab;
using msmtest::pi;

namespace {

constexpr double kEps = 0.01;

SpaceTimeField random_spacetime(const Grid2D& g, int nt, double T, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SpaceTimeField u(g, nt, T);
  for (auto& v : u.values) v = cplx(nd(rng), nd(rng));
  return u;
}

double bracket(double x) { return std::sqrt(1.0 + x * x); }

// <xi>^s <tau - |xi|^2>^b for the mode e^{i(xi.x - tau t)}.
double mode_weight(const Grid2D& g, double T, int mx, int my, int mt, double s, double b) {
  const double k0 = g.fundamental();
  const double xi2 = k0 * k0 * (mx * mx + my * my);
  const double tau = 2.0 * pi * mt / T;
  return std::pow(bracket(std::sqrt(xi2)), s) * std::pow(bracket(tau - xi2), b);
}

EnsembleSpec small_spec(EnsembleKind kind) {
  EnsembleSpec spec;
  spec.n = 16;
  spec.nt = 32;
  spec.kind = kind;
  spec.size = 3;
  spec.seed = 11;
  return spec;
}

}  // namespace

TEST_CASE("zero fields have zero norms") {
  const SpaceTimeField u(Grid2D(8, 2.0 * pi), 8, 1.0);
  CHECK(xsb_norm(u, 1.0, 0.6) == 0.0);
  CHECK(xsb_norm(u, 1.0, 0.6, XsbSign::Minus) == 0.0);
  CHECK(mixed_norm(u, 2.0, 3.0) == 0.0);
  CHECK(mixed_norm(u, std::numeric_limits<double>::infinity(), 2.0) == 0.0);
}

TEST_CASE("single space-time mode norm is one weighted term") {
  const Grid2D g(16, 2.0 * pi);
  const double T = 0.5;
  const cplx A(0.3, -0.4);
  for (auto [mx, my, mt] : {std::tuple{1, 2, 3}, std::tuple{-3, 0, -5}, std::tuple{0, 0, 0}}) {
    const SpaceTimeField u = spacetime_mode(g, 32, T, mx, my, mt, A);
    for (auto [s, b] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.51}, std::pair{-0.5, -0.3}}) {
      const double expect = std::abs(A) * mode_weight(g, T, mx, my, mt, s, b) * std::sqrt(g.volume() * T);
      CHECK(xsb_norm(u, s, b) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("unweighted norm is the space-time L2 norm") {
  const Grid2D g(8, 3.0);
  const SpaceTimeField u = random_spacetime(g, 16, 0.7, 4);
  CHECK(xsb_norm(u, 0.0, 0.0) == doctest::Approx(mixed_norm(u, 2.0, 2.0)).epsilon(1e-12));
}

TEST_CASE("property: conjugation is an isometry onto the minus space") {
  const Grid2D g(8, 2.0 * pi);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const SpaceTimeField u = random_spacetime(g, 16, 0.5, seed);
    const double a = xsb_norm(u, 1.0, 0.51);
    const double b = xsb_norm(conj(u), 1.0, 0.51, XsbSign::Minus);
    CHECK(std::abs(a - b) <= 1e-12 * a);
  }
}

TEST_CASE("property: pairing obeys the duality Cauchy-Schwarz bound") {
  const Grid2D g(8, 2.0 * pi);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const SpaceTimeField u = random_spacetime(g, 16, 0.5, 100 + seed);
    const SpaceTimeField w = random_spacetime(g, 16, 0.5, 200 + seed);
    const double lhs = std::abs(spacetime_pairing(u, w));
    const double rhs = xsb_norm(u, 1.0, 0.51) * xsb_norm(w, -1.0, -0.51, XsbSign::Minus);
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
  // Equality for a matched pair: w is the dual element of a single mode.
  const SpaceTimeField u = spacetime_mode(g, 16, 0.5, 1, -2, 3, 1.0);
  const SpaceTimeField w = conj(u);
  const double rhs = xsb_norm(u, 1.0, 0.51) * xsb_norm(w, -1.0, -0.51, XsbSign::Minus);
  CHECK(std::abs(spacetime_pairing(u, w)) == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("mixed norm of a Gaussian matches the closed form") {
  const Grid2D g(64, 12.0);
  const double T = 8.0, w = 0.8, wt = 0.6;
  SpaceTimeField u(g, 128, T);
  for (int k = 0; k < u.nt; ++k) {
    const double t = u.time(k) - 0.5 * T;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const double x = g.coordinate(0, i), y = g.coordinate(1, j);
        u.at(i, j, k) = std::exp(-(x * x + y * y) / (2 * w * w) - t * t / (2 * wt * wt));
      }
  }
  for (auto [p, q] : {std::pair{2.0, 2.0}, std::pair{4.0, 4.0}, std::pair{3.0, 1.5}, std::pair{1.0, 2.0}}) {
    // int exp(-q r^2 / 2w^2) dx = 2 pi w^2 / q; int exp(-p t^2 / 2wt^2) dt = sqrt(2 pi / p) wt.
    const double space = std::pow(2.0 * pi * w * w / q, 1.0 / q);
    const double time = std::pow(std::sqrt(2.0 * pi / p) * wt, 1.0 / p);
    CHECK(mixed_norm(u, p, q) == doctest::Approx(space * time).epsilon(1e-6));
  }
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(mixed_norm(u, inf, 2.0) == doctest::Approx(std::sqrt(pi * w * w)).epsilon(1e-6));
  CHECK(mixed_norm(u, inf, inf) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("time cutoff vanishes at the window boundary") {
  const Grid2D g(8, 2.0 * pi);
  SpaceTimeField u = random_spacetime(g, 64, 1.0, 3);
  apply_time_cutoff(u, 0.5);
  CHECK(boundary_ratio(u) < 1e-8);
  CHECK(u.cutoff == 0.5);
  CHECK(time_cutoff(0.25) == 1.0);
  CHECK(time_cutoff(-1.0) == 0.0);
  CHECK_THROWS_AS(apply_time_cutoff(u, 0.6), Error);
}

TEST_CASE("free solution norm scales with the cutoff width") {
  const Grid2D g(16, 2.0 * pi);
  const ComplexField u0 = msmtest::smooth_complex(g, 2, 3);
  const std::vector<double> deltas{0.1, 0.05, 0.025, 0.0125};
  const FreeNormCheck flat = free_solution_norm_check(u0, 1.0, 0.5, deltas, 1024, 0.5);
  CHECK(std::abs(flat.slope) < 0.01);
  for (double b : {0.51, 0.6}) {
    const FreeNormCheck c = free_solution_norm_check(u0, 1.0, b, deltas, 1024, 0.5);
    const double exponent = (1.0 - 2.0 * b) / 2.0;
    CHECK(c.slope <= exponent + 0.1);
    CHECK(std::abs(c.slope - exponent) < 0.01);
  }
  const FreeNormCheck z = free_solution_norm_check(ComplexField(g), 1.0, 0.6, deltas, 64, 0.5);
  CHECK_FALSE(z.defined);
  CHECK(z.ratios[0] == 0.0);
}

TEST_CASE("free evolution sits on the paraboloid") {
  const Grid2D g(16, 2.0 * pi);
  const ComplexField u0 = msmtest::smooth_complex(g, 8, 3);
  const SpaceTimeField u = free_evolution(u0, 256, 4.0, 2.0);
  // With a long window the b weight barely matters.
  CHECK(xsb_norm(u, 0.0, 0.5) < 1.2 * xsb_norm(u, 0.0, 0.0));
}

TEST_CASE("cubic ratio: zero input and single-mode closed form") {
  const Grid2D g(16, 2.0 * pi);
  const double T = 0.5;
  const SpaceTimeField zero(g, 32, T);
  const SpaceTimeField a = spacetime_mode(g, 32, T, 1, 0, 2, cplx(0.5, 0.1));
  const SpaceTimeField b = spacetime_mode(g, 32, T, 0, 1, -1, cplx(-0.2, 0.7));
  const SpaceTimeField c = spacetime_mode(g, 32, T, 2, -1, 1, 1.3);
  CHECK(cubic_ratio(zero, b, c, CubicVariant::ConjMiddle, 1.0, kEps) == 0.0);
  const double s = 1.0, bu = 0.5 + kEps, bl = -0.5 + 2.0 * kEps;
  const double den = mode_weight(g, T, 1, 0, 2, s, bu) * mode_weight(g, T, 0, 1, -1, s, bu) *
                     mode_weight(g, T, 2, -1, 1, s, bu) * g.volume() * T;
  CHECK(cubic_ratio(a, b, c, CubicVariant::ConjMiddle, s, kEps) ==
        doctest::Approx(mode_weight(g, T, 3, -2, 4, s, bl) / den).epsilon(1e-10));
  CHECK(cubic_ratio(a, b, c, CubicVariant::ConjPair, s, kEps) ==
        doctest::Approx(mode_weight(g, T, -1, 0, 2, s, bl) / den).epsilon(1e-10));
  CHECK(cubic_ratio(a, b, c, CubicVariant::NoConj, s, kEps) ==
        doctest::Approx(mode_weight(g, T, 3, 0, 2, s, bl) / den).epsilon(1e-10));
}

TEST_CASE("quintic ratio: zero input and single-mode closed form") {
  const Grid2D g(16, 2.0 * pi);
  const double T = 0.5;
  const SpaceTimeField zero(g, 32, T);
  const SpaceTimeField m1 = spacetime_mode(g, 32, T, 1, 0, 1, 1.0);
  const SpaceTimeField m2 = spacetime_mode(g, 32, T, 0, 1, 0, 1.0);
  const SpaceTimeField m3 = spacetime_mode(g, 32, T, 2, 0, 0, 1.0);
  const SpaceTimeField m4 = spacetime_mode(g, 32, T, 0, -1, 1, 1.0);
  const SpaceTimeField m5 = spacetime_mode(g, 32, T, 1, 1, 2, 1.0);
  CHECK(quintic_ratio(m1, m2, zero, m4, m5, 1.0, kEps) == 0.0);
  // xi_a = (1,-1), xi_b = (2,1); symbol product -(xi_a . xi_b) / (|xi_a|^2 |xi_b|^2).
  const double sym = 1.0 / (2.0 * 5.0);
  const double bu = 0.5 + kEps, bl = -0.5 + 2.0 * kEps;
  double den = std::pow(g.volume() * T, 2.0);
  for (auto [mx, my, mt] : {std::tuple{1, 0, 1}, std::tuple{0, 1, 0}, std::tuple{2, 0, 0},
                            std::tuple{0, -1, 1}, std::tuple{1, 1, 2}})
    den *= mode_weight(g, T, mx, my, mt, 1.0, bu);
  // Sum mode: (1-0+2-0+1, 0-1+0+1+1) = (4, 1), tau index 1-0+0-1+2 = 2.
  const double expect = sym * mode_weight(g, T, 4, 1, 2, 1.0, bl) / den;
  CHECK(quintic_ratio(m1, m2, m3, m4, m5, 1.0, kEps) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("null form: trivial cases and the integration by parts identity") {
  const EnsembleSpec spec = small_spec(EnsembleKind::White);
  const SpaceTimeField u1 = ensemble_member(spec, 1, 0), u2 = ensemble_member(spec, 1, 1);
  const SpaceTimeField u3 = ensemble_member(spec, 1, 2), w = conj(ensemble_member(spec, 1, 3));
  const SpaceTimeField zero(u1.grid, u1.nt, u1.t_window);
  const NullFormValue z = null_form_pairing(u1, u2, u3, zero);
  CHECK(z.direct == cplx{});
  CHECK(z.parts == cplx{});
  const NullFormValue same = null_form_pairing(u1, u1, u3, w);
  CHECK(std::abs(same.direct) == 0.0);
  CHECK(std::abs(same.parts) == 0.0);
  for (EnsembleKind kind : {EnsembleKind::White, EnsembleKind::Paraboloid, EnsembleKind::Separated}) {
    const EnsembleSpec sp = small_spec(kind);
    for (unsigned long seed = 1; seed <= 4; ++seed) {
      const NullFormValue v = null_form_pairing(ensemble_member(sp, seed, 0), ensemble_member(sp, seed, 1),
                                                ensemble_member(sp, seed, 2), conj(ensemble_member(sp, seed, 3)));
      CHECK(std::abs(v.direct) > 0.0);
      CHECK(v.relative_defect() < 1e-9);
    }
  }
}

TEST_CASE("property: ratios are invariant under scaling each input") {
  const EnsembleSpec spec = small_spec(EnsembleKind::Paraboloid);
  std::vector<SpaceTimeField> u;
  for (int slot = 0; slot < 6; ++slot) u.push_back(ensemble_member(spec, 5, slot));
  std::vector<SpaceTimeField> v = u;
  const cplx factors[] = {cplx(3.0, 0.0), cplx(0.0, -0.25), cplx(1e3, 1e3), cplx(-2.0, 0.5),
                          cplx(0.1, 0.0), cplx(7.0, -1.0)};
  for (int k = 0; k < 6; ++k) v[k] = factors[k] * u[k];
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(a); };
  for (CubicVariant cv : {CubicVariant::ConjMiddle, CubicVariant::ConjPair, CubicVariant::NoConj})
    CHECK(rel(cubic_ratio(u[0], u[1], u[2], cv, 1.0, kEps), cubic_ratio(v[0], v[1], v[2], cv, 1.0, kEps)) < 1e-12);
  CHECK(rel(quintic_ratio(u[0], u[1], u[2], u[3], u[4], 1.0, kEps),
            quintic_ratio(v[0], v[1], v[2], v[3], v[4], 1.0, kEps)) < 1e-12);
  // The potential is built from Im(u1 conj(u2)), so only real factors on that pair scale out.
  const SpaceTimeField r0 = cplx(3.0) * u[0], r1 = cplx(-0.5) * u[1];
  CHECK(rel(null_form_ratio(u[0], u[1], u[2], conj(u[5]), 1.0, kEps),
            null_form_ratio(r0, r1, v[2], conj(v[5]), 1.0, kEps)) < 1e-12);
  for (double p : {1.0, 1.5, 2.0}) {
    const BilinearRatios a = bilinear_ratios(u[0], u[1], p, kEps);
    const BilinearRatios b = bilinear_ratios(v[0], v[1], p, kEps);
    CHECK(rel(a.product, b.product) < 1e-12);
    CHECK(rel(a.conj_product, b.conj_product) < 1e-12);
    CHECK(rel(a.embedding, b.embedding) < 1e-12);
  }
}

TEST_CASE("bilinear ratios: zero input and single modes at p = 2") {
  const Grid2D g(16, 2.0 * pi);
  const double T = 0.5;
  const SpaceTimeField zero(g, 32, T);
  const SpaceTimeField a = spacetime_mode(g, 32, T, 1, 2, 1, cplx(0.0, 2.0));
  const SpaceTimeField b = spacetime_mode(g, 32, T, -1, 0, 3, 0.5);
  const BilinearRatios z = bilinear_ratios(zero, b, 2.0, kEps);
  CHECK(z.product == 0.0);
  CHECK(z.embedding == 0.0);
  const BilinearRatios r = bilinear_ratios(a, b, 2.0, kEps);
  const double bu = 0.5 + kEps;
  const double root = std::sqrt(g.volume() * T);
  CHECK(r.product == doctest::Approx(1.0 / (mode_weight(g, T, 1, 2, 1, 0.0, bu) *
                                            mode_weight(g, T, -1, 0, 3, 0.0, bu) * root))
                         .epsilon(1e-12));
  CHECK(r.conj_product == doctest::Approx(1.0 / (mode_weight(g, T, 1, 2, 1, kEps, bu) *
                                                 mode_weight(g, T, -1, 0, 3, kEps, bu) * root))
                              .epsilon(1e-12));
  CHECK_THROWS_AS(bilinear_ratios(a, b, 2.5, kEps), Error);
}

TEST_CASE("property: sup in time of the L2 norm is bounded by the X norm") {
  const Grid2D g(8, 2.0 * pi);
  const double C = sup_time_l2_constant(g, 32, 0.5, 0.0, 0.5 + kEps);
  CHECK(C > 0.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SpaceTimeField u = random_spacetime(g, 32, 0.5, seed);
    CHECK(sup_time_l2(u) <= C * xsb_norm(u, 0.0, 0.5 + kEps) * (1.0 + 1e-12));
  }
  for (unsigned long seed = 1; seed <= 5; ++seed) {
    EnsembleSpec spec = small_spec(EnsembleKind::Paraboloid);
    spec.n = 8;
    const SpaceTimeField u = ensemble_member(spec, seed, 0);
    CHECK(sup_time_l2(u) <= C * xsb_norm(u, 0.0, 0.5 + kEps) * (1.0 + 1e-12));
  }
}

TEST_CASE("two-thirds mask in space and time") {
  const Grid2D g(16, 2.0 * pi);
  const SpaceTimeField keep = spacetime_mode(g, 32, 1.0, 5, -5, 10, 1.0);
  const SpaceTimeField drop_x = spacetime_mode(g, 32, 1.0, 6, 0, 0, 1.0);
  const SpaceTimeField drop_t = spacetime_mode(g, 32, 1.0, 0, 0, 11, 1.0);
  CHECK(xsb_norm(dealias_spacetime(keep) - keep, 0.0, 0.0) < 1e-12);
  CHECK(xsb_norm(dealias_spacetime(drop_x), 0.0, 0.0) < 1e-12);
  CHECK(xsb_norm(dealias_spacetime(drop_t), 0.0, 0.0) < 1e-12);
}

TEST_CASE("ensembles are deterministic and windowed") {
  for (EnsembleKind kind : {EnsembleKind::White, EnsembleKind::Paraboloid, EnsembleKind::Separated}) {
    const EnsembleSpec spec = small_spec(kind);
    const SpaceTimeField a = ensemble_member(spec, 7, 1);
    const SpaceTimeField b = ensemble_member(spec, 7, 1);
    const SpaceTimeField c = ensemble_member(spec, 8, 1);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(boundary_ratio(a) < 1e-8);
    CHECK(parse_ensemble_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_ensemble_kind("pink"), Error);
}

TEST_CASE("ratio suite report and CSV") {
  const EnsembleSpec spec = small_spec(EnsembleKind::Separated);
  const RatioSuiteReport a = run_ratio_suite(spec, 1.0, kEps);
  const RatioSuiteReport b = run_ratio_suite(spec, 1.0, kEps);
  REQUIRE(a.records.size() == 11);
  CHECK(a.max_null_form_defect < 1e-9);
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].max_ratio > 0.0);
    CHECK(std::isfinite(a.records[k].max_ratio));
    CHECK(a.records[k].argmax_seed >= spec.seed);
    CHECK(a.records[k].argmax_seed < spec.seed + spec.size);
  }
  const std::string csv = ratio_csv(a.records);
  CHECK(csv == ratio_csv(b.records));
  CHECK(csv.rfind("test_name,grid,nt,eps,s,ensemble_size,max_ratio,argmax_seed\n", 0) == 0);
  CHECK_THROWS_AS(run_ratio_suite(spec, 0.04, kEps), Error);
}
