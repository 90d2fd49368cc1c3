#include "core/studies.hpp"

#include <cmath>

#include "core/error.hpp"
#include "core/fft.hpp"
#include "core/presets.hpp"

namespace msmlab {

namespace {

ComplexField rescale_field(const ComplexField& f, int a) {
  const Grid2D& g = f.grid;
  const int n = g.nx();
  const Grid2D fine(n * a, g.length());
  ComplexField out(fine);
  // Fine point i sits at -L/2 + i h/a; a times that is base point i - (a-1) n / 2.
  const int offset = (a - 1) * n / 2;
  for (int j = 0; j < fine.ny(); ++j)
    for (int i = 0; i < fine.nx(); ++i) {
      const int bi = i - offset, bj = j - offset;
      if (bi < 0 || bi >= n || bj < 0 || bj >= n) continue;
      out.at(i, j) = static_cast<double>(a) * f.at(bi, bj);
    }
  return out;
}

double pair_norm(const ComplexField& a, const ComplexField& b) {
  const double x = l2_norm(a), y = l2_norm(b);
  return std::sqrt(x * x + y * y);
}

}  // namespace

MsmState rescale_data(const MsmState& u, int alpha_scale) {
  require(alpha_scale >= 1, "scale factor must be a positive integer");
  return {rescale_field(u.u1, alpha_scale), rescale_field(u.u2, alpha_scale), u.t, u.target};
}

ScalingReport scaling_invariance_test(const MsmState& u0, int alpha_scale, const SolverConfig& cfg) {
  require(alpha_scale >= 1, "scale factor must be a positive integer");
  const double a2 = static_cast<double>(alpha_scale) * alpha_scale;
  const MsmState base = evolve(u0, cfg);
  const MsmState route_a = rescale_data(base, alpha_scale);
  SolverConfig scaled = cfg;
  scaled.dt = cfg.dt / a2;
  scaled.t_final = cfg.t_final / a2;
  const MsmState route_b = evolve(rescale_data(u0, alpha_scale), scaled);
  ScalingReport r;
  r.reference_norm = pair_norm(route_a.u1, route_a.u2);
  const double d = pair_norm(route_a.u1 - route_b.u1, route_a.u2 - route_b.u2);
  r.discrepancy = r.reference_norm == 0.0 ? d : d / r.reference_norm;
  return r;
}

double sobolev_norm(const MsmState& s, double index) {
  const double a = sobolev_norm(s.u1, index), b = sobolev_norm(s.u2, index);
  return std::sqrt(a * a + b * b);
}

namespace {

double tail_fraction(const ComplexField& f, int k) {
  const Spectrum s = forward_fft(f);
  const Grid2D& g = f.grid;
  double total = 0.0, tail = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double kx = g.wavenumber(0, i), ky = g.wavenumber(1, j);
      const double w = std::pow(1.0 + kx * kx + ky * ky, k) * std::norm(s.at(i, j));
      total += w;
      if (!g.dealias_keep(i, j)) tail += w;
    }
  return total == 0.0 ? 0.0 : tail / total;
}

}  // namespace

PersistenceReport regularity_persistence_test(const MsmState& u0, const SolverConfig& cfg,
                                              const PersistenceOptions& opt) {
  require(opt.k == 1 || opt.k == 2, "k must be 1 or 2");
  require(opt.threshold > 0.0 && opt.t_max > 0.0, "threshold and t_max must be positive");
  PersistenceReport r;
  r.low_norm0 = sobolev_norm(u0, opt.s_low);
  r.high_norm0 = sobolev_norm(u0, opt.k);
  r.lifetime = opt.t_max;
  r.high_norm_sup = r.high_norm0;
  if (r.low_norm0 == 0.0) return r;

  SolverConfig run = cfg;
  run.t_final = opt.t_max;
  SolverConfig free = cfg;
  free.linear_only = true;
  MsmState lin = u0;
  try {
    evolve(u0, run, [&](const MsmState& s) {
      if (s.t > u0.t) {
        free.dt = s.t - lin.t;
        lin = step(lin, free);
      }
      const double hk = sobolev_norm(s, opt.k);
      r.times.push_back(s.t - u0.t);
      r.high_norms.push_back(hk);
      r.high_norm_sup = std::max(r.high_norm_sup, hk);
      const double dev = sobolev_norm(MsmState{s.u1 - lin.u1, s.u2 - lin.u2, s.t, s.target}, opt.s_low);
      const bool lost = std::max(tail_fraction(s.u1, opt.k), tail_fraction(s.u2, opt.k)) > opt.tail_limit;
      if (lost || dev >= opt.threshold * r.low_norm0) {
        r.resolution_lost = lost;
        r.lifetime = s.t - u0.t;
        return false;
      }
      return true;
    });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoConvergence && e.code() != ErrorCode::PicardDiverged) throw;
    r.resolution_lost = true;
    r.lifetime = r.times.empty() ? 0.0 : r.times.back();
  }
  return r;
}

MsmState rippled_bump(const Grid2D& g, int carrier, const RippleFamilyParams& p, TargetSign t) {
  BumpParams b;
  b.amplitude = p.amplitude;
  b.width = p.width;
  b.twist_x = 1;
  b.twist_y = 0;
  const ComplexField u1 = smooth_bump(g, b);
  const ComplexField u2 = smooth_bump(g, BumpParams{0.8 * p.amplitude, 0.8 * p.width, 0.5, -0.5, 0, 1});
  BumpParams r;
  r.amplitude = 1.0;
  r.width = p.ripple_width;
  r.center_x = -0.5 * g.length();
  r.center_y = -0.5 * g.length();
  r.twist_x = carrier;
  r.twist_y = carrier;
  ComplexField ripple = smooth_bump(g, r);
  ripple = cplx(p.ripple_ratio * l2_norm(u1) / l2_norm(ripple)) * ripple;
  MsmState s{u1 + ripple, u2, 0.0, t};
  if (p.low_norm > 0.0) {
    const double scale = p.low_norm / sobolev_norm(s, p.s_low);
    s.u1 = cplx(scale) * s.u1;
    s.u2 = cplx(scale) * s.u2;
  }
  return s;
}

}  // namespace msmlab
