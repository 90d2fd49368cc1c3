#include "core/gauge.hpp"

#include <cmath>

#include "core/error.hpp"
#include "core/snapshot.hpp"
#include "core/spectral.hpp"

namespace msmlab {

namespace {

int axes_of(const Grid2D& g) { return g.is_line() ? 1 : 2; }

RealField h_factor(const ComplexField& s, TargetSign t) {
  const double sg = sigma(t);
  RealField h(s.grid);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double d = 1.0 + sg * std::norm(s[k]);
    if (!(d > 0.0)) fail(ErrorCode::ChartUndefined, "chart coordinate outside the disk");
    h[k] = 1.0 / d;
  }
  return h;
}

ComplexField phase(const RealField& psi) {
  ComplexField e(psi.grid);
  for (std::size_t k = 0; k < psi.size(); ++k) e[k] = std::polar(1.0, psi[k]);
  return e;
}

double ratio(double num, double den) { return den == 0.0 ? (num == 0.0 ? 0.0 : INFINITY) : num / den; }

}  // namespace

std::array<ComplexField, 2> b_fields(const ComplexField& s, TargetSign t) {
  if (!all_finite(s)) fail(ErrorCode::ChartUndefined, "chart coordinate is not finite");
  const RealField h = h_factor(s, t);
  std::array<ComplexField, 2> b{ComplexField(s.grid), ComplexField(s.grid)};
  for (int j = 0; j < axes_of(s.grid); ++j) b[static_cast<std::size_t>(j)] = h * derivative(s, j);
  return b;
}

std::array<ComplexField, 2> b_fields(const MapField& m) {
  return b_fields(to_stereographic(m), m.target);
}

std::array<RealField, 2> connection_source(const ComplexField& s, TargetSign t) {
  const double sg = sigma(t);
  const auto b = b_fields(s, t);
  std::array<RealField, 2> c{RealField(s.grid), RealField(s.grid)};
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < s.size(); ++k)
      c[j][k] = 2.0 * sg * (s[k].imag() * b[j][k].real() - s[k].real() * b[j][k].imag());
  return c;
}

namespace {

RealField divergence(const std::array<RealField, 2>& v) {
  RealField d = derivative(v[0], 0);
  if (!v[0].grid.is_line()) d = d + derivative(v[1], 1);
  return d;
}

}  // namespace

RealField solve_hodge_gauge(const ComplexField& s, TargetSign t) {
  InverseLaplacianOptions io;
  io.project_mean = true;
  return inverse_laplacian(divergence(connection_source(s, t)), io).field;
}

double hodge_residual(const ComplexField& s, const RealField& psi, TargetSign t) {
  const auto c = connection_source(s, t);
  const RealField src = divergence(c);
  const RealField res = src - laplacian(psi);
  return ratio(l2_norm(res), l2_norm(src));
}

namespace {

void fill_dependent(GaugeState& gs, const MsmCoefficients& c) {
  const ComplexField& s = gs.s;
  const RealField h = h_factor(s, gs.target);
  const ComplexField e = phase(gs.psi);
  const auto src = connection_source(s, gs.target);
  gs.u1 = (h * e) * derivative(s, 0);
  gs.u2 = (h * e) * derivative(s, 1);
  gs.a1 = src[0] - derivative(gs.psi, 0);
  gs.a2 = src[1] - derivative(gs.psi, 1);
  gs.a_mean = {mean(gs.a1), mean(gs.a2)};
  const auto beta = compute_beta(gs.u1, gs.u2, c);
  gs.beta = beta.field;
  gs.beta_source_mean = beta.removed_mean / c.beta;
  gs.kappa12 = -1.0 * gs.beta;
  gs.a0 = compute_alpha(gs.u1, gs.u2, c);
}

}  // namespace

GaugeState build_gauge_state(const ComplexField& s, TargetSign t) {
  return build_gauge_state(s, t, MsmCoefficients::derived(t));
}

GaugeState build_gauge_state(const ComplexField& s, TargetSign t, const MsmCoefficients& c) {
  require(!s.grid.is_line(), "use hasimoto_1d for one-dimensional maps");
  const Grid2D& g = s.grid;
  GaugeState gs{s, t, solve_hodge_gauge(s, t), ComplexField(g), ComplexField(g), RealField(g),
                RealField(g), {}, RealField(g), RealField(g), RealField(g), 0.0};
  fill_dependent(gs, c);
  return gs;
}

GaugeState build_gauge_state(const MapField& m) {
  return build_gauge_state(to_stereographic(m), m.target);
}

GaugeState shift_phase(const GaugeState& gs, double shift) {
  GaugeState out = gs;
  for (auto& v : out.psi.values) v += shift;
  fill_dependent(out, MsmCoefficients::derived(gs.target));
  return out;
}

double divergence_norm(const GaugeState& gs) { return l2_norm(divergence({gs.a1, gs.a2})); }

ConsistencyReport verify_consistency(const GaugeState& gs, const ConsistencyOptions& opt) {
  require(opt.oversample >= 1, "oversample must be >= 1");
  const int nf = gs.grid().nx() * opt.oversample;
  const double sg = sigma(gs.target);
  ConsistencyReport r;

  // Connection recomputed from the interpolated map and phase.
  {
    const ComplexField s = resample(gs.s, nf);
    const RealField psi = resample(gs.psi, nf);
    const auto src = connection_source(s, gs.target);
    const RealField a1 = src[0] - derivative(psi, 0);
    const RealField a2 = src[1] - derivative(psi, 1);
    const RealField d1 = derivative(a1, 0), d2 = derivative(a2, 1);
    r.k5 = ratio(l2_norm(d1 + d2), l2_norm(d1) + l2_norm(d2));
  }

  const ComplexField u1 = resample(gs.u1, nf), u2 = resample(gs.u2, nf);
  const RealField a1 = resample(gs.a1, nf), a2 = resample(gs.a2, nf);
  const cplx I(0.0, 1.0);
  {
    const ComplexField du2 = derivative(u2, 0) + I * (a1 * u2);
    const ComplexField du1 = derivative(u1, 1) + I * (a2 * u1);
    r.k7 = ratio(l2_norm(du2 - du1), l2_norm(du2) + l2_norm(du1));
  }
  {
    const RealField curl = derivative(a2, 0) - derivative(a1, 1);
    const RealField rhs = (opt.curvature * sg) * im_product(u1, u2);
    r.k8 = ratio(l2_norm(curl - rhs), l2_norm(curl) + l2_norm(rhs));
  }
  return r;
}

RealField compute_a0(const GaugeState& gs, const MsmCoefficients& c) {
  return compute_alpha(gs.u1, gs.u2, c);
}

Hasimoto1D hasimoto_1d(const ComplexField& s, TargetSign t) {
  require(s.grid.is_line(), "hasimoto_1d expects a line grid");
  if (!all_finite(s)) fail(ErrorCode::ChartUndefined, "chart coordinate is not finite");
  const auto src = connection_source(s, t)[0];
  Hasimoto1D out{ComplexField(s.grid), RealField(s.grid), mean(src)};
  RealField centered = src;
  for (auto& v : centered.values) v -= out.a_mean;
  out.psi = real_part(apply_multiplier(to_complex(centered), [](double kx, double) {
    return kx == 0.0 ? cplx{} : 1.0 / cplx(0.0, kx);
  }));
  out.u = (h_factor(s, t) * phase(out.psi)) * derivative(s, 0);
  return out;
}

void write_gauge_bundle(const std::string& path, const GaugeState& gs) {
  write_bundle(path, {{"u1", make_snapshot(gs.u1)},
                      {"u2", make_snapshot(gs.u2)},
                      {"a1", make_snapshot(gs.a1)},
                      {"a2", make_snapshot(gs.a2)},
                      {"a0", make_snapshot(gs.a0)},
                      {"psi", make_snapshot(gs.psi)},
                      {"beta", make_snapshot(gs.beta)},
                      {"alpha", make_snapshot(gs.a0)}});
}

}  // namespace msmlab
