#pragma once

#include <array>

#include "core/field.hpp"

namespace msmlab {

/// Curvature of the target: the unit sphere or the hyperboloid
/// X^2 + Y^2 - Z^2 = -1, Z > 0.
enum class TargetSign : int { Sphere = 1, Hyperbolic = -1 };

inline double sigma(TargetSign t) { return static_cast<double>(static_cast<int>(t)); }

using Vec3Field = std::array<RealField, 3>;

/// Map into the target in its embedded representation. The stereographic
/// chart (from the north pole for the sphere, the Poincare disk for the
/// hyperboloid) is derived on demand.
struct MapField {
  Vec3Field s;
  TargetSign target = TargetSign::Sphere;

  const Grid2D& grid() const { return s[0].grid; }
};

MapField constant_map(const Grid2D& g, std::array<double, 3> value, TargetSign target);
MapField from_stereographic(const ComplexField& w, TargetSign target);
/// Throws ChartUndefined if some point sits at the north pole (sphere).
ComplexField to_stereographic(const MapField& m);

/// max |<s,s> - sigma| with the Euclidean or Minkowski form.
double constraint_error(const MapField& m);
/// Rescales every point back onto the target.
MapField renormalize(const MapField& m);

/// 1/2 int |grad s|^2 with the ambient (Euclidean or Minkowski) metric.
double energy(const MapField& m);
/// 2 int |grad w|^2 / (1 + sigma |w|^2)^2 in the stereographic chart.
double energy_stereographic(const ComplexField& w, TargetSign target);

/// Euclidean cross product (sphere) or its Minkowski analogue (hyperboloid),
/// the latter satisfying <a x b, c>_M = det(a, b, c).
Vec3Field cross(const Vec3Field& a, const Vec3Field& b, TargetSign target);
Vec3Field laplacian(const Vec3Field& v);

/// Landau-Lifshitz right-hand side -sigma s x Delta s.
Vec3Field ll_rhs(const MapField& m);

/// Tension field: tangential part of Delta s.
Vec3Field harmonic_residual(const MapField& m);
/// Tension in the stereographic chart:
/// Delta w - 2 sigma conj(w) sum_j (d_j w)^2 / (1 + sigma |w|^2).
ComplexField chart_tension(const ComplexField& w, TargetSign target);

struct StepOptions {
  /// Largest admissible dt / dx^2.
  double cfl = 0.05;
  int max_iters = 200;
  double tol = 1e-14;
};

struct StepStats {
  int iterations = 0;
  double last_increment = 0.0;
};

/// One implicit-midpoint step of the Landau-Lifshitz flow, solved by
/// fixed-point iteration, followed by projection onto the target.
MapField step_geometric(const MapField& m, double dt, const StepOptions& opt = {},
                        StepStats* stats = nullptr);

/// Advances to time t with the largest admissible equal substeps.
MapField evolve_map(const MapField& m, double t, const StepOptions& opt = {});

/// Applies a 3x3 rotation to every point (sphere target).
MapField rotate(const MapField& m, const std::array<std::array<double, 3>, 3>& q);

}  // namespace msmlab
