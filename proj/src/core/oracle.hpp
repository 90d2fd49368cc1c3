#pragma once

#include <string>
#include <vector>

#include "core/gauge.hpp"
#include "core/map_dynamics.hpp"
#include "core/msm.hpp"

namespace msmlab {

/// Snapshots of a map evolved by the geometric flow at a uniform spacing.
struct MapTrajectory {
  std::vector<MapField> frames;
  double dt = 0.0;
};

/// Evolves m and records frames + 1 snapshots spaced by dt.
MapTrajectory record_trajectory(const MapField& m, double dt, int frames,
                                const StepOptions& opt = {});

struct GaugeResidualSeries {
  std::vector<double> times;
  /// ||du/dt - RHS(u)|| / ||du/dt|| summed over both components.
  std::vector<double> residual;

  double max() const;
};

/// Gauge-transforms every frame and compares centered time differences of
/// (u1, u2) with the right-hand side of the modified system. The constant
/// connection (a1, a2, a0) read off the frames enters as a background.
GaugeResidualSeries msm_residual_of_gauge_trajectory(const MapTrajectory& traj,
                                                     const MsmCoefficients& c);

struct OracleRung {
  int n;
  double dt;
  double residual;
};

struct OracleLadder {
  std::vector<OracleRung> rungs;
  /// residual[k] / residual[k+1]
  std::vector<double> reductions;
};

struct OracleSetup {
  double length = 4.0 * 3.141592653589793;
  double t_final = 0.1;
  double amplitude = 0.5;
  double width = 1.0;
  TargetSign target = TargetSign::Sphere;
  std::vector<std::pair<int, double>> ladder{{32, 4e-3}, {64, 2e-3}, {128, 1e-3}};
};

OracleLadder run_oracle_ladder(const OracleSetup& setup, const MsmCoefficients& c);

/// Picks the candidate whose gauge-trajectory residual is smallest.
struct CandidateScore {
  std::string name;
  double residual;
};
std::vector<CandidateScore> score_candidates(const MapTrajectory& traj,
                                             const std::vector<std::pair<std::string, MsmCoefficients>>& cands);

/// Fit of i u_t + (d + i a)^2 u + c |u|^2 u - lambda(t) u = 0 along the
/// one-dimensional gauge transform of a map trajectory; lambda(t) is a real
/// per-frame phase rate and c is shared by all frames.
struct NlsFit {
  double c = 0.0;
  /// Relative residual after the fit.
  double residual = 0.0;
};

NlsFit fit_hasimoto_nls(const MapTrajectory& traj);

/// || i u_t + u_xx + c |u|^2 u || / || u_xx || for the soliton
/// eta sqrt(2/c) sech(eta x) e^{i eta^2 t} at t = 0, with spectral u_xx.
double soliton_residual(int n, double length, double eta, double c);

}  // namespace msmlab
