#include "core/field.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace msmlab {

namespace {

template <typename R, typename A, typename B, typename Op>
Field<R> zip(const Field<A>& a, const Field<B>& b, Op op) {
  require_same_grid(a.grid, b.grid);
  Field<R> out(a.grid);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = op(a[k], b[k]);
  return out;
}

template <typename R, typename A, typename Op>
Field<R> map(const Field<A>& a, Op op) {
  Field<R> out(a.grid);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = op(a[k]);
  return out;
}

}  // namespace

ComplexField to_complex(const RealField& f) {
  return map<cplx>(f, [](double v) { return cplx(v, 0.0); });
}
RealField real_part(const ComplexField& f) {
  return map<double>(f, [](cplx v) { return v.real(); });
}
RealField imag_part(const ComplexField& f) {
  return map<double>(f, [](cplx v) { return v.imag(); });
}
ComplexField conj(const ComplexField& f) {
  return map<cplx>(f, [](cplx v) { return std::conj(v); });
}

bool all_finite(const RealField& f) {
  return std::all_of(f.values.begin(), f.values.end(), [](double v) { return std::isfinite(v); });
}
bool all_finite(const ComplexField& f) {
  return std::all_of(f.values.begin(), f.values.end(), [](cplx v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
  return zip<cplx>(a, b, std::plus<>{});
}
ComplexField operator-(const ComplexField& a, const ComplexField& b) {
  return zip<cplx>(a, b, std::minus<>{});
}
ComplexField operator*(const ComplexField& a, const ComplexField& b) {
  return zip<cplx>(a, b, std::multiplies<>{});
}
ComplexField operator*(cplx c, const ComplexField& a) {
  return map<cplx>(a, [c](cplx v) { return c * v; });
}
ComplexField operator*(const RealField& r, const ComplexField& a) {
  return zip<cplx>(r, a, [](double x, cplx v) { return x * v; });
}
RealField operator+(const RealField& a, const RealField& b) {
  return zip<double>(a, b, std::plus<>{});
}
RealField operator-(const RealField& a, const RealField& b) {
  return zip<double>(a, b, std::minus<>{});
}
RealField operator*(const RealField& a, const RealField& b) {
  return zip<double>(a, b, std::multiplies<>{});
}
RealField operator*(double c, const RealField& a) {
  return map<double>(a, [c](double v) { return c * v; });
}

double mean(const RealField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s / static_cast<double>(f.size());
}
cplx mean(const ComplexField& f) {
  cplx s{};
  for (cplx v : f.values) s += v;
  return s / static_cast<double>(f.size());
}

// NaN entries propagate to the result.
double max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f.values)
    if (!(std::abs(v) <= m)) m = std::abs(v);
  return m;
}
double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (cplx v : f.values)
    if (!(std::abs(v) <= m)) m = std::abs(v);
  return m;
}

double l2_norm(const RealField& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(s * f.grid.cell_measure());
}
double l2_norm(const ComplexField& f) {
  double s = 0.0;
  for (cplx v : f.values) s += std::norm(v);
  return std::sqrt(s * f.grid.cell_measure());
}
double rms(const RealField& f) {
  return l2_norm(f) / std::sqrt(f.grid.volume());
}
double rms(const ComplexField& f) {
  return l2_norm(f) / std::sqrt(f.grid.volume());
}

double integrate(const RealField& f) {
  return mean(f) * f.grid.volume();
}
cplx integrate(const ComplexField& f) {
  return mean(f) * f.grid.volume();
}

}  // namespace msmlab
