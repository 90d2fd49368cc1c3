#pragma once

#include <functional>
#include <vector>

#include "core/field.hpp"

namespace msmlab {

/// Multiplies every Fourier coefficient by m(kx, ky), physical wavenumbers.
ComplexField apply_multiplier(const ComplexField& f,
                              const std::function<cplx(double, double)>& m);
RealField apply_multiplier_real(const RealField& f,
                                const std::function<cplx(double, double)>& m);

ComplexField derivative(const ComplexField& f, int axis);
RealField derivative(const RealField& f, int axis);
ComplexField laplacian(const ComplexField& f);
RealField laplacian(const RealField& f);

/// Zeroes every mode removed by the two-thirds rule.
ComplexField dealias(const ComplexField& f);
RealField dealias(const RealField& f);

struct InverseLaplacianOptions {
  /// Subtract the mean instead of raising NonzeroMean.
  bool project_mean = false;
  /// Relative tolerance on |mean(f)| against the rms of f.
  double tol_mean = 1e-10;
};

template <typename F>
struct PoissonSolution {
  F field;
  /// Mean that was removed from the source (zero unless projected).
  decltype(mean(std::declval<F>())) removed_mean;
};

/// Solves Δg = f with mean(g) = 0.
PoissonSolution<ComplexField> inverse_laplacian(const ComplexField& f,
                                                const InverseLaplacianOptions& opt = {});
PoissonSolution<RealField> inverse_laplacian(const RealField& f,
                                             const InverseLaplacianOptions& opt = {});

/// Riesz transform with symbol xi_axis / |xi| (zero at the origin). The
/// symbol is real and odd, so real input gives imaginary output; there is
/// no real-field overload.
ComplexField riesz_transform(const ComplexField& f, int axis);

/// Smooth cutoff: 1 on [0,1], 0 on [2,inf), C-infinity in between.
double lp_cutoff(double r);
/// Symbol of the Littlewood-Paley block R evaluated at |xi| = r. R == 0 is
/// the low block chi(2r); dyadic R >= 1 gives chi(r/R) - chi(2r/R).
double lp_symbol(double R, double r);
/// Dyadic levels {0, 1, 2, 4, ...} whose blocks sum to one on the grid.
std::vector<double> lp_levels(const Grid2D& g);
ComplexField lp_project(const ComplexField& f, double R);

/// (sum <xi>^{2s} |f^(xi)|^2)^(1/2), normalized so s = 0 gives the L2 norm.
double sobolev_norm(const ComplexField& f, double s);
double sobolev_norm(const RealField& f, double s);

/// Trigonometric interpolation onto a grid with the same period and a
/// different resolution. Nyquist modes are split symmetrically when refining.
ComplexField resample(const ComplexField& f, int n);
RealField resample(const RealField& f, int n);

}  // namespace msmlab
