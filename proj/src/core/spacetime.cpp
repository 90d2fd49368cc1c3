#include "core/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "core/fft.hpp"
#include "core/spectral.hpp"

namespace msmlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<int> extents_of(const SpaceTimeField& u) {
  return {u.nt, u.grid.ny(), u.grid.nx()};
}

int signed_mode(int n, int k) { return k < n / 2 ? k : k - n; }

}  // namespace

SpaceTimeField::SpaceTimeField(const Grid2D& g, int nt_, double t_window_)
    : grid(g), nt(nt_), t_window(t_window_) {
  require(!g.is_line(), "space-time fields need a two-dimensional grid");
  require(nt_ >= 4 && is_power_of_two(nt_), "nt must be a power of two >= 4");
  require(t_window_ > 0.0, "time window must be positive");
  values.assign(g.size() * static_cast<std::size_t>(nt_), cplx{});
}

ComplexField SpaceTimeField::slice(int k) const {
  ComplexField f(grid);
  const auto first = values.begin() + static_cast<std::ptrdiff_t>(index(0, 0, k));
  std::copy(first, first + static_cast<std::ptrdiff_t>(grid.size()), f.values.begin());
  return f;
}

void SpaceTimeField::set_slice(int k, const ComplexField& f) {
  require_same_grid(grid, f.grid);
  std::copy(f.values.begin(), f.values.end(),
            values.begin() + static_cast<std::ptrdiff_t>(index(0, 0, k)));
}

void require_same_shape(const SpaceTimeField& a, const SpaceTimeField& b) {
  require_same_grid(a.grid, b.grid);
  if (a.nt != b.nt || a.t_window != b.t_window)
    fail(ErrorCode::ShapeMismatch, "space-time fields have different time grids");
}

double tau_of_index(int nt, double t_window, int k) {
  // FFT index k carries e^{+i omega t} with omega = 2 pi m / T; tau = -omega.
  return -2.0 * kPi * signed_mode(nt, k) / t_window;
}

double time_cutoff(double r) { return lp_cutoff(2.0 * std::abs(r)); }

void apply_time_cutoff(SpaceTimeField& u, double delta) {
  require(delta > 0.0 && delta <= 0.5 * u.t_window, "cutoff width must lie in (0, T/2]");
  const std::size_t plane = u.grid.size();
  for (int k = 0; k < u.nt; ++k) {
    const double w = time_cutoff((u.time(k) - 0.5 * u.t_window) / delta);
    for (std::size_t p = 0; p < plane; ++p) u.values[k * plane + p] *= w;
  }
  u.cutoff = delta;
}

double boundary_ratio(const SpaceTimeField& u) {
  double top = 0.0;
  double edge = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) top = std::max(top, std::abs(u.values[p]));
  for (std::size_t p = 0; p < u.grid.size(); ++p) edge = std::max(edge, std::abs(u.values[p]));
  return top == 0.0 ? 0.0 : edge / top;
}

SpaceTimeField free_evolution(const ComplexField& u0, int nt, double t_window, double delta) {
  SpaceTimeField u(u0.grid, nt, t_window);
  const Spectrum s0 = forward_fft(u0);
  const Grid2D& g = u0.grid;
  for (int k = 0; k < nt; ++k) {
    const double t = u.time(k) - 0.5 * t_window;
    Spectrum sk(g);
    for (int j = 0; j < g.ny(); ++j) {
      const double ky = g.wavenumber(1, j);
      for (int i = 0; i < g.nx(); ++i) {
        const double kx = g.wavenumber(0, i);
        sk.at(i, j) = s0.at(i, j) * std::polar(1.0, -t * (kx * kx + ky * ky));
      }
    }
    u.set_slice(k, inverse_fft(sk));
  }
  apply_time_cutoff(u, delta);
  return u;
}

SpaceTimeField spacetime_mode(const Grid2D& g, int nt, double t_window, int mx, int my, int mt,
                              cplx amplitude) {
  SpaceTimeField u(g, nt, t_window);
  const double k0 = g.fundamental();
  const double tau = 2.0 * kPi * mt / t_window;
  for (int k = 0; k < nt; ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const double phase =
            k0 * (mx * g.coordinate(0, i) + my * g.coordinate(1, j)) - tau * u.time(k);
        u.at(i, j, k) = amplitude * std::polar(1.0, phase);
      }
  return u;
}

std::vector<cplx> spacetime_fft(const SpaceTimeField& u) {
  std::vector<cplx> c = u.values;
  fft_inplace(c, extents_of(u), FftDirection::Forward);
  return c;
}

SpaceTimeField spacetime_ifft(const Grid2D& g, int nt, double t_window, std::vector<cplx> coeffs) {
  SpaceTimeField u(g, nt, t_window);
  if (coeffs.size() != u.size()) fail(ErrorCode::ShapeMismatch, "coefficient count mismatch");
  fft_inplace(coeffs, extents_of(u), FftDirection::Backward);
  const double inv = 1.0 / static_cast<double>(coeffs.size());
  for (auto& c : coeffs) c *= inv;
  u.values = std::move(coeffs);
  return u;
}

SpaceTimeField apply_spatial_multiplier(const SpaceTimeField& u,
                                        const std::function<cplx(double, double)>& m) {
  const Grid2D& g = u.grid;
  std::vector<cplx> sym(g.size());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      sym[g.index(i, j)] = m(g.wavenumber(0, i), g.wavenumber(1, j));
  std::vector<cplx> c = spacetime_fft(u);
  const std::size_t plane = g.size();
  for (int k = 0; k < u.nt; ++k)
    for (std::size_t p = 0; p < plane; ++p) c[k * plane + p] *= sym[p];
  SpaceTimeField out = spacetime_ifft(g, u.nt, u.t_window, std::move(c));
  out.cutoff = u.cutoff;
  return out;
}

SpaceTimeField dealias_spacetime(const SpaceTimeField& u) {
  const Grid2D& g = u.grid;
  std::vector<cplx> c = spacetime_fft(u);
  for (int k = 0; k < u.nt; ++k) {
    const bool keep_t = 3 * std::abs(signed_mode(u.nt, k)) <= u.nt;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        if (!keep_t || !g.dealias_keep(i, j)) c[u.index(i, j, k)] = 0.0;
  }
  SpaceTimeField out = spacetime_ifft(g, u.nt, u.t_window, std::move(c));
  out.cutoff = u.cutoff;
  return out;
}

double xsb_weight_sq(const Grid2D& g, int nt, double t_window, int i, int j, int k, double s,
                     double b, XsbSign sign) {
  auto reps_space = [&](int axis, int idx) {
    const double w = g.wavenumber(axis, idx);
    return g.is_nyquist(axis, idx) ? std::vector<double>{w, -w} : std::vector<double>{w};
  };
  const double tau = tau_of_index(nt, t_window, k);
  const std::vector<double> taus =
      k == nt / 2 ? std::vector<double>{tau, -tau} : std::vector<double>{tau};
  const double sg = sign == XsbSign::Plus ? -1.0 : 1.0;
  double acc = 0.0;
  int count = 0;
  for (double kx : reps_space(0, i))
    for (double ky : reps_space(1, j))
      for (double t : taus) {
        const double xi2 = kx * kx + ky * ky;
        const double d = t + sg * xi2;
        acc += std::pow(1.0 + xi2, s) * std::pow(1.0 + d * d, b);
        ++count;
      }
  return acc / count;
}

double xsb_norm(const SpaceTimeField& u, double s, double b, XsbSign sign) {
  const Grid2D& g = u.grid;
  const std::vector<cplx> c = spacetime_fft(u);
  double acc = 0.0;
  for (int k = 0; k < u.nt; ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const cplx v = c[u.index(i, j, k)];
        const double a2 = std::norm(v);
        if (a2 == 0.0) continue;
        acc += xsb_weight_sq(g, u.nt, u.t_window, i, j, k, s, b, sign) * a2;
      }
  return std::sqrt(acc * g.cell_measure() * u.dt() / static_cast<double>(u.size()));
}

double mixed_norm(const SpaceTimeField& u, double p, double q) {
  require(p >= 1.0 && q >= 1.0, "mixed norm exponents must be >= 1");
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t plane = u.grid.size();
  const double cell = u.grid.cell_measure();
  double outer = 0.0;
  for (int k = 0; k < u.nt; ++k) {
    double inner = 0.0;
    for (std::size_t x = 0; x < plane; ++x) {
      const double a = std::abs(u.values[k * plane + x]);
      if (q == inf)
        inner = std::max(inner, a);
      else
        inner += std::pow(a, q);
    }
    if (q != inf) inner = std::pow(cell * inner, 1.0 / q);
    if (p == inf)
      outer = std::max(outer, inner);
    else
      outer += std::pow(inner, p);
  }
  return p == inf ? outer : std::pow(u.dt() * outer, 1.0 / p);
}

cplx spacetime_pairing(const SpaceTimeField& u, const SpaceTimeField& w) {
  require_same_shape(u, w);
  cplx acc{};
  for (std::size_t p = 0; p < u.size(); ++p) acc += u.values[p] * w.values[p];
  return acc * u.grid.cell_measure() * u.dt();
}

SpaceTimeField conj(const SpaceTimeField& u) {
  SpaceTimeField out = u;
  for (auto& v : out.values) v = std::conj(v);
  return out;
}

namespace {

template <typename Op>
SpaceTimeField combine(const SpaceTimeField& a, const SpaceTimeField& b, Op op) {
  require_same_shape(a, b);
  SpaceTimeField out = a;
  for (std::size_t p = 0; p < a.size(); ++p) out.values[p] = op(a.values[p], b.values[p]);
  out.cutoff = std::max(a.cutoff, b.cutoff);
  return out;
}

}  // namespace

SpaceTimeField operator*(const SpaceTimeField& a, const SpaceTimeField& b) {
  return combine(a, b, [](cplx x, cplx y) { return x * y; });
}

SpaceTimeField operator+(const SpaceTimeField& a, const SpaceTimeField& b) {
  return combine(a, b, [](cplx x, cplx y) { return x + y; });
}

SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b) {
  return combine(a, b, [](cplx x, cplx y) { return x - y; });
}

SpaceTimeField operator*(cplx c, const SpaceTimeField& a) {
  SpaceTimeField out = a;
  for (auto& v : out.values) v *= c;
  return out;
}

double free_solution_norm_ratio(const ComplexField& u0, double s, double b, double delta, int nt,
                                double t_window) {
  const double h = sobolev_norm(u0, s);
  if (h == 0.0) return 0.0;
  return xsb_norm(free_evolution(u0, nt, t_window, delta), s, b) / h;
}

FreeNormCheck free_solution_norm_check(const ComplexField& u0, double s, double b,
                                       const std::vector<double>& deltas, int nt,
                                       double t_window) {
  require(deltas.size() >= 2, "slope fit needs at least two cutoff widths");
  FreeNormCheck out;
  out.deltas = deltas;
  if (sobolev_norm(u0, s) == 0.0) {
    out.ratios.assign(deltas.size(), 0.0);
    out.defined = false;
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double d : deltas) {
    const double r = free_solution_norm_ratio(u0, s, b, d, nt, t_window);
    out.ratios.push_back(r);
    const double x = std::log(d);
    const double y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(deltas.size());
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

}  // namespace msmlab
