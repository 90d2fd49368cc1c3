#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "core/field.hpp"
#include "core/map_dynamics.hpp"
#include "core/spectral.hpp"

namespace msmlab {

/// Constants of the modified system
///   du_j/dt = i Delta u_j + 2 (beta_x1 d2 u_j - beta_x2 d1 u_j) - i alpha u_j
///             - i |grad beta|^2 u_j + cubic Im(u_k conj u_j) u_k,
///   Delta beta  = beta * Im(u_1 conj u_2),
///   Delta alpha = alpha * sum_{k,j} [d_k d_j Re(u_k conj u_j) - trace d_k^2 |u_j|^2].
struct MsmCoefficients {
  double beta;
  double cubic;
  double alpha;
  double trace;

  /// Values that make gauge transforms of Schrodinger maps exact solutions.
  static MsmCoefficients derived(TargetSign t);
  /// Constants in the form usually printed for the system: Delta beta =
  /// 2 Im(u1 conj u2), cubic coefficient 1, alpha with factor 2 and unit trace
  /// weight (sign flipped for the hyperbolic target).
  static MsmCoefficients printed(TargetSign t);
};

/// Constant part of the connection, (a1, a2) and a0, that survives on the
/// torus. Zero on the plane.
struct BackgroundConnection {
  double a1 = 0.0;
  double a2 = 0.0;
  double a0 = 0.0;

  bool is_zero() const { return a1 == 0.0 && a2 == 0.0 && a0 == 0.0; }
};

struct MsmState {
  ComplexField u1;
  ComplexField u2;
  double t = 0.0;
  TargetSign target = TargetSign::Sphere;

  const Grid2D& grid() const { return u1.grid; }
};

/// Im(a conj b), evaluated so that a == b gives exactly zero.
RealField im_product(const ComplexField& a, const ComplexField& b);

double mass(const MsmState& s);

struct PotentialOptions {
  /// Remove the mean of the source before the Poisson solve.
  bool project_mean = true;
};

/// beta with Delta beta = c * Im(u1 conj u2); removed_mean reports the
/// projected mean of the source.
PoissonSolution<RealField> compute_beta(const ComplexField& u1, const ComplexField& u2,
                                        const MsmCoefficients& c, const PotentialOptions& opt = {});
/// alpha from its Poisson equation (second derivatives assembled spectrally).
RealField compute_alpha(const ComplexField& u1, const ComplexField& u2, const MsmCoefficients& c);
/// alpha from the Riesz-transform form
/// c [ sum R_j R_k Re(u_k conj u_j) - trace (|u|^2 - mean |u|^2) ].
RealField compute_alpha_riesz(const ComplexField& u1, const ComplexField& u2,
                              const MsmCoefficients& c);

/// Nonlinear part of the right-hand side, split by structure. Index 0/1 is
/// the component.
struct NonlinearTerms {
  std::array<ComplexField, 2> null_form;
  std::array<ComplexField, 2> alpha_term;
  std::array<ComplexField, 2> cubic;
  std::array<ComplexField, 2> quintic;
  /// Cross terms between the background connection and grad beta.
  std::array<ComplexField, 2> background;

  ComplexField total(int j) const;
};

struct TermOptions {
  bool dealias = true;
  PotentialOptions potentials;
};

NonlinearTerms nonlinear_terms(const ComplexField& u1, const ComplexField& u2,
                               const MsmCoefficients& c,
                               const BackgroundConnection& bg = {}, const TermOptions& opt = {});

/// Linear part i Delta_a u - i a0 u with Delta_a built from the background
/// connection; diagonal in Fourier space with symbol -i(|k + a|^2 + a0).
ComplexField linear_term(const ComplexField& u, const BackgroundConnection& bg = {});

/// Full right-hand side for both components.
std::array<ComplexField, 2> msm_rhs(const ComplexField& u1, const ComplexField& u2,
                                    const MsmCoefficients& c, const BackgroundConnection& bg = {},
                                    const TermOptions& opt = {});

/// grad Delta^{-1}(u_a conj u_b) . grad Delta^{-1}(u_c conj u_d) u_e.
ComplexField quintic_form(const ComplexField& ua, const ComplexField& ub, const ComplexField& uc,
                          const ComplexField& ud, const ComplexField& ue);

enum class Scheme { StrangSplit, EtdRk4, PicardDuhamel };

Scheme parse_scheme(const std::string& name);
const char* to_string(Scheme s);

struct SolverConfig {
  double dt = 1e-3;
  double t_final = 0.0;
  Scheme scheme = Scheme::StrangSplit;
  int picard_max_iters = 30;
  double picard_tol = 1e-12;
  /// Exponent parameter shared with the space-time analysis.
  double epsilon = 0.01;
  /// Drop every nonlinear term (free evolution).
  bool linear_only = false;
  bool dealias = true;
  MsmCoefficients coefficients = MsmCoefficients::derived(TargetSign::Sphere);
  BackgroundConnection background;
};

void validate(const SolverConfig& cfg);

/// Advances by cfg.dt.
MsmState step(const MsmState& s, const SolverConfig& cfg);
/// Advances to cfg.t_final with steps of cfg.dt (last step shortened).
/// The optional observer sees every state including the initial one and
/// stops the run early by returning false.
MsmState evolve(const MsmState& s, const SolverConfig& cfg,
                const std::function<bool(const MsmState&)>& observer = {});

}  // namespace msmlab
