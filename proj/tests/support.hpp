#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "core/field.hpp"

namespace msmtest {

using msmlab::ComplexField;
using msmlab::Grid2D;
using msmlab::RealField;
using msmlab::cplx;

inline constexpr double pi = std::numbers::pi;

inline ComplexField random_complex(const Grid2D& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexField f(g);
  for (auto& v : f.values) v = cplx(nd(rng), nd(rng));
  return f;
}

inline RealField random_real(const Grid2D& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  RealField f(g);
  for (auto& v : f.values) v = nd(rng);
  return f;
}

/// Trigonometric polynomial with random coefficients on integer modes
/// |m| <= kmax, decaying like exp(-|m|^2 / kmax).
inline ComplexField smooth_complex(const Grid2D& g, std::uint64_t seed, int kmax = 3,
                                   double amplitude = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexField f(g);
  const double k0 = g.fundamental();
  const int ky_max = g.is_line() ? 0 : kmax;
  for (int my = -ky_max; my <= ky_max; ++my)
    for (int mx = -kmax; mx <= kmax; ++mx) {
      const double decay = std::exp(-double(mx * mx + my * my) / kmax);
      const cplx c = amplitude * decay * cplx(nd(rng), nd(rng));
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
          const double ph = k0 * (mx * g.coordinate(0, i) + my * g.coordinate(1, j));
          f.at(i, j) += c * std::polar(1.0, ph);
        }
    }
  return f;
}

/// smooth_complex rescaled so that its largest modulus equals peak.
inline ComplexField smooth_peak(const Grid2D& g, std::uint64_t seed, int kmax, double peak) {
  auto f = smooth_complex(g, seed, kmax);
  double m = 0.0;
  for (auto v : f.values) m = std::max(m, std::abs(v));
  for (auto& v : f.values) v *= peak / m;
  return f;
}

inline RealField smooth_real(const Grid2D& g, std::uint64_t seed, int kmax = 3,
                             double amplitude = 1.0) {
  return msmlab::real_part(smooth_complex(g, seed, kmax, amplitude));
}

inline double max_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline double max_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace msmtest
