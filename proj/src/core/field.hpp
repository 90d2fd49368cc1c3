#pragma once

#include <complex>
#include <vector>

#include "core/grid.hpp"

namespace msmlab {

using cplx = std::complex<double>;

/// Values sampled on a Grid2D, stored row-major (x fastest).
template <typename T>
struct Field {
  Grid2D grid;
  std::vector<T> values;

  explicit Field(const Grid2D& g) : grid(g), values(g.size(), T{}) {}
  Field(const Grid2D& g, std::vector<T> v) : grid(g), values(std::move(v)) {}

  std::size_t size() const noexcept { return values.size(); }
  T& operator[](std::size_t k) { return values[k]; }
  const T& operator[](std::size_t k) const { return values[k]; }
  T& at(int i, int j) { return values[grid.index(i, j)]; }
  const T& at(int i, int j) const { return values[grid.index(i, j)]; }
};

using RealField = Field<double>;
using ComplexField = Field<cplx>;

/// Fourier coefficients in FFTW order (unnormalized forward transform).
struct Spectrum {
  Grid2D grid;
  std::vector<cplx> coeffs;

  explicit Spectrum(const Grid2D& g) : grid(g), coeffs(g.size(), cplx{}) {}
  cplx& at(int i, int j) { return coeffs[grid.index(i, j)]; }
  const cplx& at(int i, int j) const { return coeffs[grid.index(i, j)]; }
};

/// Evaluates f(x, y) at every grid point.
template <typename T, typename F>
Field<T> sample(const Grid2D& g, F&& f) {
  Field<T> out(g);
  for (int j = 0; j < g.ny(); ++j) {
    const double y = g.coordinate(1, j);
    for (int i = 0; i < g.nx(); ++i) out.at(i, j) = f(g.coordinate(0, i), y);
  }
  return out;
}

ComplexField to_complex(const RealField& f);
RealField real_part(const ComplexField& f);
RealField imag_part(const ComplexField& f);
ComplexField conj(const ComplexField& f);

bool all_finite(const RealField& f);
bool all_finite(const ComplexField& f);

// Pointwise arithmetic. Grids must agree.
ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(const ComplexField& a, const ComplexField& b);
ComplexField operator*(cplx c, const ComplexField& a);
ComplexField operator*(const RealField& r, const ComplexField& a);
RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(const RealField& a, const RealField& b);
RealField operator*(double c, const RealField& a);

double mean(const RealField& f);
cplx mean(const ComplexField& f);
double max_abs(const RealField& f);
double max_abs(const ComplexField& f);
/// (cell_measure * sum |f|^2)^(1/2)
double l2_norm(const RealField& f);
double l2_norm(const ComplexField& f);
double rms(const RealField& f);
double rms(const ComplexField& f);
/// Quadrature of f over the periodic domain.
double integrate(const RealField& f);
cplx integrate(const ComplexField& f);

}  // namespace msmlab
