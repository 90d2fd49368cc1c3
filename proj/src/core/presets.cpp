#include "core/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "core/error.hpp"

namespace msmlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

ComplexField smooth_bump(const Grid2D& g, const BumpParams& p) {
  require(p.width > 0.0, "bump width must be positive");
  const double L = g.length();
  const double kappa = std::pow(L / (kTwoPi * p.width), 2);
  const bool line = g.is_line();
  return sample<cplx>(g, [&](double x, double y) {
    double e = std::cos(kTwoPi * (x - p.center_x) / L) - 1.0;
    if (!line) e += std::cos(kTwoPi * (y - p.center_y) / L) - 1.0;
    const double ph = kTwoPi * (p.twist_x * x + (line ? 0.0 : p.twist_y * y)) / L;
    return p.amplitude * std::exp(kappa * e) * std::polar(1.0, ph);
  });
}

ComplexField single_mode(const Grid2D& g, int mx, int my, double amplitude) {
  const double k = g.fundamental();
  return sample<cplx>(g, [&](double x, double y) {
    return amplitude * std::polar(1.0, k * (mx * x + my * y));
  });
}

ComplexField soliton_1d(const Grid2D& line, double eta, double c) {
  require(line.is_line(), "soliton_1d expects a line grid");
  require(eta > 0.0 && c > 0.0, "soliton parameters must be positive");
  const double amp = eta * std::sqrt(2.0 / c);
  return sample<cplx>(line, [&](double x, double) { return cplx(amp / std::cosh(eta * x), 0.0); });
}

MapField near_north_pole(const Grid2D& g, double theta0, double width) {
  BumpParams p;
  p.amplitude = 1.0;
  p.width = width;
  p.twist_x = 0;
  p.twist_y = 0;
  const ComplexField b = smooth_bump(g, p);
  MapField m = constant_map(g, {0.0, 0.0, 1.0}, TargetSign::Sphere);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double th = theta0 * b.at(i, j).real();
      const double phi = std::atan2(g.coordinate(1, j), g.coordinate(0, i));
      const std::size_t k = g.index(i, j);
      m.s[0][k] = std::sin(th) * std::cos(phi);
      m.s[1][k] = std::sin(th) * std::sin(phi);
      m.s[2][k] = std::cos(th);
    }
  return m;
}

ComplexField random_seeded(const Grid2D& g, std::uint64_t seed, int kmax, double amplitude) {
  require(kmax >= 0 && 2 * kmax < g.nx(), "kmax must lie in [0, n/2)");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Spectrum s(g);
  const int ky_max = g.is_line() ? 0 : kmax;
  for (int my = -ky_max; my <= ky_max; ++my)
    for (int mx = -kmax; mx <= kmax; ++mx) {
      const double w = std::exp(-double(mx * mx + my * my) / std::max(kmax, 1));
      const int i = (mx + g.nx()) % g.nx();
      const int j = (my + g.ny()) % g.ny();
      s.at(i, j) += w * cplx(nd(rng), nd(rng));
    }
  ComplexField f(g);
  // Synthesis by direct summation keeps the result independent of FFT layout.
  const double k0 = g.fundamental();
  for (int jj = 0; jj < g.ny(); ++jj)
    for (int ii = 0; ii < g.nx(); ++ii) {
      cplx acc{};
      for (int my = -ky_max; my <= ky_max; ++my)
        for (int mx = -kmax; mx <= kmax; ++mx) {
          const cplx c = s.at((mx + g.nx()) % g.nx(), (my + g.ny()) % g.ny());
          acc += c * std::polar(1.0, k0 * (mx * g.coordinate(0, ii) + my * g.coordinate(1, jj)));
        }
      f.at(ii, jj) = acc;
    }
  const double m = max_abs(f);
  if (m > 0.0)
    for (auto& v : f.values) v *= amplitude / m;
  return f;
}

}  // namespace msmlab
