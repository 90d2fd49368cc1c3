#pragma once

#include <cstdint>

#include "core/field.hpp"
#include "core/map_dynamics.hpp"

namespace msmlab {

/// Periodic bump A exp(kappa (cos(2 pi (x-cx)/L) + cos(2 pi (y-cy)/L) - 2)),
/// kappa = (L / (2 pi width))^2, which is close to a Gaussian of the given
/// width when width << L. The twist multiplies by the plane wave
/// exp(2 pi i (mx x + my y) / L).
struct BumpParams {
  double amplitude = 0.5;
  double width = 1.0;
  double center_x = 0.0;
  double center_y = 0.0;
  int twist_x = 1;
  int twist_y = 2;
};

ComplexField smooth_bump(const Grid2D& g, const BumpParams& p);

/// A exp(2 pi i (mx x + my y) / L).
ComplexField single_mode(const Grid2D& g, int mx, int my, double amplitude);

/// eta sqrt(2 / c) sech(eta x): the bright soliton profile of
/// i u_t + u_xx + c |u|^2 u = 0 (solution eta sqrt(2/c) sech(eta x) e^{i eta^2 t}).
ComplexField soliton_1d(const Grid2D& line, double eta, double c = 1.0);

/// Sphere map whose polar angle from the north pole is theta0 * bump,
/// rotating in azimuth; reaches the pole where the bump vanishes.
MapField near_north_pole(const Grid2D& g, double theta0, double width);

/// Random trigonometric polynomial on modes |m| <= kmax with Gaussian
/// weights, rescaled to the given sup norm.
ComplexField random_seeded(const Grid2D& g, std::uint64_t seed, int kmax, double amplitude);

}  // namespace msmlab
