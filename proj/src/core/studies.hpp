#pragma once

#include <vector>

#include "core/msm.hpp"

namespace msmlab {

/// Compares two routes to the rescaled solution u_a(x, t) = a u(a x, a^2 t).
/// Route A solves from u0 on the base grid to time T and rescales the result;
/// route B rescales u0 onto a grid with a times the points (same period) and
/// solves to T / a^2 with dt / a^2. The rescaled fields are compared on the
/// whole torus, the rescaled route-A field being zero outside |x| < L/(2a).
struct ScalingReport {
  double discrepancy = 0.0;
  double reference_norm = 0.0;
};

ScalingReport scaling_invariance_test(const MsmState& u0, int alpha_scale, const SolverConfig& cfg);

/// Places a u(a x) on a grid with a times the points and the same period.
MsmState rescale_data(const MsmState& u, int alpha_scale);

struct PersistenceOptions {
  /// Sobolev index of the tracked high norm.
  int k = 1;
  /// Low index measuring the size of the data.
  double s_low = 0.01;
  /// Relative deviation from the free evolution, in the low norm, that ends
  /// the stable interval.
  double threshold = 0.1;
  double t_max = 2.0;
  /// Fraction of H^k energy in the outermost third of the spectrum that
  /// counts as loss of resolution.
  double tail_limit = 1e-6;
};

struct PersistenceReport {
  /// First time ||u - e^{it Delta} u0||_{H^s_low} >= threshold ||u0||_{H^s_low},
  /// or loss of resolution, capped at t_max.
  double lifetime = 0.0;
  bool resolution_lost = false;
  double low_norm0 = 0.0;
  double high_norm0 = 0.0;
  /// sup_{t <= lifetime} ||u(t)||_{H^k}.
  double high_norm_sup = 0.0;
  std::vector<double> times;
  std::vector<double> high_norms;
};

PersistenceReport regularity_persistence_test(const MsmState& u0, const SolverConfig& cfg,
                                              const PersistenceOptions& opt = {});

double sobolev_norm(const MsmState& s, double index);

/// Data for persistence experiments: a twisted bump of the given amplitude
/// in each component plus, in u1, a wave packet centred at the far corner of
/// the torus with carrier mode (k, k) and L2 mass ripple_ratio times that of
/// the u1 bump. The result is rescaled so that its H^s_low norm equals
/// low_norm when low_norm > 0.
struct RippleFamilyParams {
  double amplitude = 2.0;
  double width = 1.0;
  double ripple_width = 1.5;
  double ripple_ratio = 1.5;
  double low_norm = 0.0;
  double s_low = 0.01;
};

MsmState rippled_bump(const Grid2D& g, int carrier, const RippleFamilyParams& p,
                      TargetSign t = TargetSign::Sphere);

}  // namespace msmlab
