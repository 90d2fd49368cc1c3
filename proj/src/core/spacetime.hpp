#pragma once

#include <functional>
#include <vector>

#include "core/field.hpp"

namespace msmlab {

/// Complex samples u(x, y, t) on a periodic spatial grid times nt uniform
/// times t_k = k * T / nt in [0, T). Storage is time-major: values[(k*ny + j)*nx + i].
///
/// Space-time modes are e^{i(xi.x - tau t)}, so a free Schrodinger wave
/// e^{it Delta} e^{i xi.x} sits on the paraboloid tau = |xi|^2.
struct SpaceTimeField {
  Grid2D grid;
  int nt;
  double t_window;
  /// Half-width delta of the time cutoff psi((t - T/2)/delta); 0 when no
  /// cutoff has been applied.
  double cutoff = 0.0;
  std::vector<cplx> values;

  SpaceTimeField(const Grid2D& g, int nt, double t_window);

  double dt() const noexcept { return t_window / nt; }
  double time(int k) const noexcept { return k * dt(); }
  std::size_t size() const noexcept { return values.size(); }
  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(k) * grid.ny() + static_cast<std::size_t>(j)) * grid.nx() +
           static_cast<std::size_t>(i);
  }
  cplx& at(int i, int j, int k) { return values[index(i, j, k)]; }
  const cplx& at(int i, int j, int k) const { return values[index(i, j, k)]; }

  ComplexField slice(int k) const;
  void set_slice(int k, const ComplexField& f);
};

void require_same_shape(const SpaceTimeField& a, const SpaceTimeField& b);

/// Temporal frequency tau of FFT index k (Nyquist maps to the negative end).
double tau_of_index(int nt, double t_window, int k);

/// psi(r): 1 for |r| <= 1/2, 0 for |r| >= 1, smooth in between.
double time_cutoff(double r);

/// Multiplies by psi((t - T/2)/delta); requires 0 < delta <= T/2.
void apply_time_cutoff(SpaceTimeField& u, double delta);

/// max |u(., t_0)| / max |u|, or 0 for the zero field.
double boundary_ratio(const SpaceTimeField& u);

/// psi((t - T/2)/delta) e^{i(t - T/2) Delta} u0.
SpaceTimeField free_evolution(const ComplexField& u0, int nt, double t_window, double delta);

/// amplitude * e^{i(xi.x - tau t)} with xi = (mx, my) * fundamental and
/// tau = 2 pi mt / T. No cutoff.
SpaceTimeField spacetime_mode(const Grid2D& g, int nt, double t_window, int mx, int my, int mt,
                              cplx amplitude);

/// Unnormalized forward transform over (t, y, x).
std::vector<cplx> spacetime_fft(const SpaceTimeField& u);
/// Normalized inverse of spacetime_fft.
SpaceTimeField spacetime_ifft(const Grid2D& g, int nt, double t_window, std::vector<cplx> coeffs);

/// Multiplies every space-time coefficient by m(kx, ky) (time-independent).
SpaceTimeField apply_spatial_multiplier(const SpaceTimeField& u,
                                        const std::function<cplx(double, double)>& m);

/// Two-thirds mask in x, y and t.
SpaceTimeField dealias_spacetime(const SpaceTimeField& u);

enum class XsbSign { Plus, Minus };

/// Squared weight <xi>^{2s} <tau -+ |xi|^2>^{2b} of the coefficient at
/// storage index (i, j, k). Nyquist indices average the squared weight over
/// both signed representatives so conjugation stays an exact isometry.
double xsb_weight_sq(const Grid2D& g, int nt, double t_window, int i, int j, int k, double s,
                     double b, XsbSign sign);

/// Discrete X_{s,b} (Plus) or X^-_{s,b} (Minus) norm. With s = b = 0 it is
/// the space-time L2 norm.
double xsb_norm(const SpaceTimeField& u, double s, double b, XsbSign sign = XsbSign::Plus);

/// L^p_t L^q_x norm by rectangle quadrature; p or q may be infinity.
double mixed_norm(const SpaceTimeField& u, double p, double q);

/// Bilinear pairing: integral of u * w over space-time.
cplx spacetime_pairing(const SpaceTimeField& u, const SpaceTimeField& w);

SpaceTimeField conj(const SpaceTimeField& u);
SpaceTimeField operator*(const SpaceTimeField& a, const SpaceTimeField& b);
SpaceTimeField operator+(const SpaceTimeField& a, const SpaceTimeField& b);
SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b);
SpaceTimeField operator*(cplx c, const SpaceTimeField& a);

struct FreeNormCheck {
  std::vector<double> deltas;
  std::vector<double> ratios;
  /// Least-squares slope of log(ratio) against log(delta).
  double slope = 0.0;
  /// False when u0 vanishes and the ratio is undefined.
  bool defined = true;
};

/// ||psi(t/delta) e^{it Delta} u0||_{X_{s,b}} / ||u0||_{H^s}, 0 when u0 = 0.
double free_solution_norm_ratio(const ComplexField& u0, double s, double b, double delta, int nt,
                                double t_window);

FreeNormCheck free_solution_norm_check(const ComplexField& u0, double s, double b,
                                       const std::vector<double>& deltas, int nt,
                                       double t_window);

}  // namespace msmlab
