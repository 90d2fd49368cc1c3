#pragma once

#include <array>
#include <string>

#include "core/field.hpp"
#include "core/map_dynamics.hpp"
#include "core/msm.hpp"

namespace msmlab {

/// Frame-rotated derivative fields of a map in the divergence-free gauge,
/// with the connection and its potentials.
///
///   h = 1 / (1 + sigma |s|^2),  u_j = h e^{i psi} d_j s,
///   a_j = 2 sigma Im(h s conj(d_j s)) - d_j psi,
///   a = a_mean + (d2 beta, -d1 beta),  kappa12 = -beta.
///
/// On the torus the connection keeps a constant part a_mean; the rest is
/// carried by beta. a0 holds the mean-free temporal connection computed
/// from u.
struct GaugeState {
  ComplexField s;
  TargetSign target = TargetSign::Sphere;
  RealField psi;
  ComplexField u1, u2;
  RealField a1, a2;
  std::array<double, 2> a_mean{};
  RealField beta;
  RealField kappa12;
  RealField a0;
  /// Mean of Im(u1 conj u2) removed before the beta solve.
  double beta_source_mean = 0.0;

  const Grid2D& grid() const { return s.grid; }
};

/// b_j = d_j s / (1 + sigma |s|^2).
std::array<ComplexField, 2> b_fields(const ComplexField& s, TargetSign t);
std::array<ComplexField, 2> b_fields(const MapField& m);

/// 2 sigma Im(conj(b_j) s), the connection before the gauge correction.
std::array<RealField, 2> connection_source(const ComplexField& s, TargetSign t);

/// psi with Delta psi = div(connection_source), zero mean.
RealField solve_hodge_gauge(const ComplexField& s, TargetSign t);
/// || div(source - grad psi) ||_2 normalized by || div source ||_2 (0 if both vanish).
double hodge_residual(const ComplexField& s, const RealField& psi, TargetSign t);

/// Potentials use the derived constants for the target unless given.
GaugeState build_gauge_state(const ComplexField& s, TargetSign t);
GaugeState build_gauge_state(const ComplexField& s, TargetSign t, const MsmCoefficients& c);
GaugeState build_gauge_state(const MapField& m);

/// Replaces psi by psi + shift and rebuilds the dependent fields.
GaugeState shift_phase(const GaugeState& gs, double shift);

/// Spectral divergence of (a1, a2) on the grid, L2 norm.
double divergence_norm(const GaugeState& gs);

/// Normalized residuals of the consistency system.
///   k5: div a,
///   k7: D1 u2 - D2 u1 with D_j = d_j + i a_j,
///   k8: (d1 a2 - d2 a1) - curvature * Im(u1 conj u2).
/// All quantities are evaluated from the band-limited interpolants of the
/// stored fields on a grid refined by the oversampling factor, so that
/// products are exact and truncation errors are measured.
struct ConsistencyReport {
  double k5 = 0.0;
  double k7 = 0.0;
  double k8 = 0.0;
};

struct ConsistencyOptions {
  int oversample = 2;
  /// Coefficient of Im(u1 conj u2) in the curvature identity, times sigma.
  double curvature = 4.0;
};

ConsistencyReport verify_consistency(const GaugeState& gs, const ConsistencyOptions& opt = {});

/// Temporal connection from its Poisson equation with the given constants.
RealField compute_a0(const GaugeState& gs, const MsmCoefficients& c);

/// One-dimensional gauge: psi' = 2 sigma Im(h s conj(s_x)) - a, a the mean
/// of the source, u = h e^{i psi} s_x.
struct Hasimoto1D {
  ComplexField u;
  RealField psi;
  double a_mean = 0.0;
};

Hasimoto1D hasimoto_1d(const ComplexField& s, TargetSign t);

/// Writes the named records u1, u2, a1, a2, a0, psi, beta, alpha.
void write_gauge_bundle(const std::string& path, const GaugeState& gs);

}  // namespace msmlab
