#include "core/map_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/spectral.hpp"

namespace msmlab {

namespace {

const Grid2D& grid_of(const Vec3Field& v) { return v[0].grid; }

Vec3Field zero_vec(const Grid2D& g) { return {RealField(g), RealField(g), RealField(g)}; }

double inner(const std::array<double, 3>& a, const std::array<double, 3>& b, double sg) {
  return a[0] * b[0] + a[1] * b[1] + sg * a[2] * b[2];
}

std::array<double, 3> point(const Vec3Field& v, std::size_t k) { return {v[0][k], v[1][k], v[2][k]}; }

// Ambient squared length of the gradient at every point, summed over axes.
RealField gradient_density(const MapField& m) {
  const double sg = sigma(m.target);
  const Grid2D& g = m.grid();
  RealField dens(g);
  const int axes = g.is_line() ? 1 : 2;
  for (int axis = 0; axis < axes; ++axis) {
    std::array<RealField, 3> d{derivative(m.s[0], axis), derivative(m.s[1], axis), derivative(m.s[2], axis)};
    for (std::size_t k = 0; k < g.size(); ++k) dens[k] += inner(point(d, k), point(d, k), sg);
  }
  return dens;
}

}  // namespace

MapField constant_map(const Grid2D& g, std::array<double, 3> value, TargetSign target) {
  MapField m{zero_vec(g), target};
  for (std::size_t c = 0; c < 3; ++c)
    for (auto& v : m.s[c].values) v = value[c];
  return m;
}

MapField from_stereographic(const ComplexField& w, TargetSign target) {
  const double sg = sigma(target);
  MapField m{zero_vec(w.grid), target};
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double r2 = std::norm(w[k]);
    const double denom = 1.0 + sg * r2;
    if (target == TargetSign::Hyperbolic && denom <= 0.0)
      fail(ErrorCode::ChartUndefined, "Poincare coordinate outside the unit disk");
    const cplx xy = 2.0 * w[k] / denom;
    m.s[0][k] = xy.real();
    m.s[1][k] = xy.imag();
    m.s[2][k] = (r2 - sg) / denom;
  }
  return m;
}

ComplexField to_stereographic(const MapField& m) {
  const double sg = sigma(m.target);
  ComplexField w(m.grid());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double denom = 1.0 - sg * m.s[2][k];
    if (!(std::abs(denom) > 1e-12)) fail(ErrorCode::ChartUndefined, "map reaches the north pole");
    w[k] = cplx(m.s[0][k], m.s[1][k]) / denom;
  }
  return w;
}

double constraint_error(const MapField& m) {
  const double sg = sigma(m.target);
  double err = 0.0;
  for (std::size_t k = 0; k < m.grid().size(); ++k) {
    const auto p = point(m.s, k);
    err = std::max(err, std::abs(inner(p, p, sg) - sg));
  }
  return err;
}

MapField renormalize(const MapField& m) {
  const double sg = sigma(m.target);
  MapField out = m;
  for (std::size_t k = 0; k < m.grid().size(); ++k) {
    const auto p = point(m.s, k);
    const double q = sg * inner(p, p, sg);
    if (!(q > 0.0)) fail(ErrorCode::InvalidArgument, "point cannot be projected onto the target");
    const double scale = 1.0 / std::sqrt(q);
    for (std::size_t c = 0; c < 3; ++c) out.s[c][k] *= scale;
  }
  return out;
}

double energy(const MapField& m) { return 0.5 * integrate(gradient_density(m)); }

double energy_stereographic(const ComplexField& w, TargetSign target) {
  const double sg = sigma(target);
  const Grid2D& g = w.grid;
  RealField dens(g);
  const int axes = g.is_line() ? 1 : 2;
  for (int axis = 0; axis < axes; ++axis) {
    const auto d = derivative(w, axis);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double h = 1.0 + sg * std::norm(w[k]);
      dens[k] += std::norm(d[k]) / (h * h);
    }
  }
  return 2.0 * integrate(dens);
}

Vec3Field cross(const Vec3Field& a, const Vec3Field& b, TargetSign target) {
  const double sg = sigma(target);
  Vec3Field c = zero_vec(grid_of(a));
  for (std::size_t k = 0; k < grid_of(a).size(); ++k) {
    c[0][k] = a[1][k] * b[2][k] - a[2][k] * b[1][k];
    c[1][k] = a[2][k] * b[0][k] - a[0][k] * b[2][k];
    c[2][k] = sg * (a[0][k] * b[1][k] - a[1][k] * b[0][k]);
  }
  return c;
}

Vec3Field laplacian(const Vec3Field& v) {
  const Grid2D& g = grid_of(v);
  ComplexField packed(g);
  for (std::size_t k = 0; k < g.size(); ++k) packed[k] = cplx(v[0][k], v[1][k]);
  const ComplexField lp = laplacian(packed);
  Vec3Field out{real_part(lp), imag_part(lp), laplacian(v[2])};
  return out;
}

Vec3Field ll_rhs(const MapField& m) {
  Vec3Field f = cross(m.s, laplacian(m.s), m.target);
  const double sg = sigma(m.target);
  for (auto& c : f)
    for (auto& v : c.values) v *= -sg;
  return f;
}

Vec3Field harmonic_residual(const MapField& m) {
  const double sg = sigma(m.target);
  Vec3Field lap = laplacian(m.s);
  for (std::size_t k = 0; k < m.grid().size(); ++k) {
    const auto p = point(m.s, k);
    const double coef = inner(p, point(lap, k), sg) / inner(p, p, sg);
    for (std::size_t c = 0; c < 3; ++c) lap[c][k] -= coef * p[c];
  }
  return lap;
}

ComplexField chart_tension(const ComplexField& w, TargetSign target) {
  const double sg = sigma(target);
  const Grid2D& g = w.grid;
  ComplexField out = laplacian(w);
  const int axes = g.is_line() ? 1 : 2;
  for (int axis = 0; axis < axes; ++axis) {
    const auto d = derivative(w, axis);
    for (std::size_t k = 0; k < g.size(); ++k)
      out[k] -= 2.0 * sg * std::conj(w[k]) * d[k] * d[k] / (1.0 + sg * std::norm(w[k]));
  }
  return out;
}

MapField step_geometric(const MapField& m, double dt, const StepOptions& opt, StepStats* stats) {
  const Grid2D& g = m.grid();
  require(dt > 0.0, "dt must be positive");
  const double limit = opt.cfl * g.dx() * g.dx();
  if (dt > limit * (1.0 + 1e-12))
    fail(ErrorCode::InvalidArgument, "dt " + std::to_string(dt) + " exceeds the stability bound " +
                                         std::to_string(limit));
  double scale = 0.0;
  for (const auto& c : m.s) scale = std::max(scale, max_abs(c));

  MapField mid = m;
  double increment = 0.0;
  for (int it = 1; it <= opt.max_iters; ++it) {
    const Vec3Field f = ll_rhs(mid);
    increment = 0.0;
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double next = m.s[c][k] + 0.5 * dt * f[c][k];
        increment = std::max(increment, std::abs(next - mid.s[c][k]));
        mid.s[c][k] = next;
      }
    if (increment <= opt.tol * scale) {
      if (stats) *stats = {it, increment};
      MapField out = m;
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t k = 0; k < g.size(); ++k) out.s[c][k] = 2.0 * mid.s[c][k] - m.s[c][k];
      return renormalize(out);
    }
  }
  fail(ErrorCode::NoConvergence, "implicit midpoint iteration did not converge (last increment " +
                                     std::to_string(increment) + ")");
}

MapField evolve_map(const MapField& m, double t, const StepOptions& opt) {
  require(t >= 0.0, "time must be nonnegative");
  if (t == 0.0) return m;
  const double limit = opt.cfl * m.grid().dx() * m.grid().dx();
  const auto steps = static_cast<long>(std::ceil(t / limit));
  const double dt = t / static_cast<double>(steps);
  MapField cur = m;
  for (long k = 0; k < steps; ++k) cur = step_geometric(cur, dt, opt);
  return cur;
}

MapField rotate(const MapField& m, const std::array<std::array<double, 3>, 3>& q) {
  MapField out = m;
  for (std::size_t k = 0; k < m.grid().size(); ++k) {
    const auto p = point(m.s, k);
    for (std::size_t r = 0; r < 3; ++r) out.s[r][k] = q[r][0] * p[0] + q[r][1] * p[1] + q[r][2] * p[2];
  }
  return out;
}

}  // namespace msmlab
