#include "core/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/presets.hpp"
#include "core/spectral.hpp"

namespace msmlab {

MapTrajectory record_trajectory(const MapField& m, double dt, int frames, const StepOptions& opt) {
  require(dt > 0.0 && frames >= 2, "trajectory needs dt > 0 and at least two frames");
  MapTrajectory traj{{m}, dt};
  MapField cur = m;
  for (int k = 0; k < frames; ++k) {
    cur = evolve_map(cur, dt, opt);
    traj.frames.push_back(cur);
  }
  return traj;
}

double GaugeResidualSeries::max() const {
  return residual.empty() ? 0.0 : *std::max_element(residual.begin(), residual.end());
}

namespace {

struct Frame {
  ComplexField s;
  GaugeState gs;
};

double norm2(const ComplexField& a, const ComplexField& b) {
  const double x = l2_norm(a), y = l2_norm(b);
  return std::sqrt(x * x + y * y);
}

}  // namespace

GaugeResidualSeries msm_residual_of_gauge_trajectory(const MapTrajectory& traj,
                                                     const MsmCoefficients& c) {
  require(traj.frames.size() >= 3, "need at least three frames for centered differences");
  const TargetSign t = traj.frames.front().target;
  const double sg = sigma(t);
  std::vector<Frame> frames;
  frames.reserve(traj.frames.size());
  for (const auto& m : traj.frames) {
    ComplexField s = to_stereographic(m);
    GaugeState gs = build_gauge_state(s, t, c);
    frames.push_back({std::move(s), std::move(gs)});
  }
  GaugeResidualSeries out;
  TermOptions opt;
  opt.dealias = false;
  const double inv2dt = 1.0 / (2.0 * traj.dt);
  for (std::size_t k = 1; k + 1 < frames.size(); ++k) {
    const GaugeState& g = frames[k].gs;
    const ComplexField ut1 = inv2dt * (frames[k + 1].gs.u1 - frames[k - 1].gs.u1);
    const ComplexField ut2 = inv2dt * (frames[k + 1].gs.u2 - frames[k - 1].gs.u2);
    // Constant temporal connection: the mean of 2 sigma Im(h s conj(s_t)).
    const ComplexField st = inv2dt * (frames[k + 1].s - frames[k - 1].s);
    double a0 = 0.0;
    for (std::size_t p = 0; p < st.size(); ++p) {
      const cplx s = frames[k].s[p];
      const double h = 1.0 / (1.0 + sg * std::norm(s));
      a0 += 2.0 * sg * h * (s.imag() * st[p].real() - s.real() * st[p].imag());
    }
    a0 /= static_cast<double>(st.size());
    const BackgroundConnection bg{g.a_mean[0], g.a_mean[1], a0};
    const auto rhs = msm_rhs(g.u1, g.u2, c, bg, opt);
    const double num = norm2(ut1 - rhs[0], ut2 - rhs[1]);
    const double den = norm2(ut1, ut2);
    out.times.push_back(traj.frames.size() > 0 ? static_cast<double>(k) * traj.dt : 0.0);
    out.residual.push_back(den == 0.0 ? num : num / den);
  }
  return out;
}

OracleLadder run_oracle_ladder(const OracleSetup& setup, const MsmCoefficients& c) {
  OracleLadder out;
  for (auto [n, dt] : setup.ladder) {
    const Grid2D g(n, setup.length);
    BumpParams p;
    p.amplitude = setup.amplitude;
    p.width = setup.width;
    const MapField m = from_stereographic(smooth_bump(g, p), setup.target);
    const int frames = std::max(2, static_cast<int>(std::lround(setup.t_final / dt)));
    const MapTrajectory traj = record_trajectory(m, dt, frames);
    out.rungs.push_back({n, dt, msm_residual_of_gauge_trajectory(traj, c).max()});
  }
  for (std::size_t k = 0; k + 1 < out.rungs.size(); ++k)
    out.reductions.push_back(out.rungs[k].residual / out.rungs[k + 1].residual);
  return out;
}

std::vector<CandidateScore> score_candidates(
    const MapTrajectory& traj, const std::vector<std::pair<std::string, MsmCoefficients>>& cands) {
  std::vector<CandidateScore> out;
  for (const auto& [name, c] : cands) out.push_back({name, msm_residual_of_gauge_trajectory(traj, c).max()});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.residual < b.residual; });
  return out;
}

namespace {

double re_inner(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
  return s * a.grid.cell_measure();
}

// Removes the real multiple of u from f.
ComplexField project_out(const ComplexField& f, const ComplexField& u) {
  const double uu = re_inner(u, u);
  if (uu == 0.0) return f;
  return f - cplx(re_inner(u, f) / uu) * u;
}

}  // namespace

NlsFit fit_hasimoto_nls(const MapTrajectory& traj) {
  require(traj.frames.size() >= 3, "need at least three frames");
  const TargetSign t = traj.frames.front().target;
  std::vector<Hasimoto1D> h;
  for (const auto& m : traj.frames) h.push_back(hasimoto_1d(to_stereographic(m), t));
  const cplx I(0.0, 1.0);
  std::vector<ComplexField> rs, qs;
  for (std::size_t k = 1; k + 1 < h.size(); ++k) {
    const ComplexField& u = h[k].u;
    const double a = h[k].a_mean;
    const ComplexField ut = (1.0 / (2.0 * traj.dt)) * (h[k + 1].u - h[k - 1].u);
    const ComplexField ux = derivative(u, 0);
    // (d + i a)^2 u = u_xx + 2 i a u_x - a^2 u
    const ComplexField cov = derivative(ux, 0) + (2.0 * I * a) * ux + cplx(-a * a) * u;
    ComplexField q(u.grid);
    for (std::size_t p = 0; p < u.size(); ++p) q[p] = std::norm(u[p]) * u[p];
    rs.push_back(project_out(I * ut + cov, u));
    qs.push_back(project_out(q, u));
  }
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    num += re_inner(qs[k], rs[k]);
    den += re_inner(qs[k], qs[k]);
  }
  NlsFit fit;
  fit.c = den == 0.0 ? 0.0 : -num / den;
  double res = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const ComplexField r = rs[k] + cplx(fit.c) * qs[k];
    res += re_inner(r, r);
    scale += re_inner(rs[k], rs[k]) + fit.c * fit.c * re_inner(qs[k], qs[k]);
  }
  fit.residual = scale == 0.0 ? 0.0 : std::sqrt(res / scale);
  return fit;
}

double soliton_residual(int n, double length, double eta, double c) {
  const Grid2D g = Grid2D::line(n, length);
  const ComplexField u = soliton_1d(g, eta, c);
  const cplx I(0.0, 1.0);
  // u_t = i eta^2 u at t = 0.
  const ComplexField iut = cplx(-eta * eta) * u;
  const ComplexField uxx = derivative(derivative(u, 0), 0);
  ComplexField res = iut + uxx;
  for (std::size_t p = 0; p < u.size(); ++p) res[p] += c * std::norm(u[p]) * u[p];
  return l2_norm(res) / l2_norm(uxx);
}

}  // namespace msmlab
