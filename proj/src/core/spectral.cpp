#include "core/spectral.hpp"

#include <cmath>

#include "core/error.hpp"
#include "core/fft.hpp"

namespace msmlab {

namespace {

template <typename M>
ComplexField multiply_spectrum(const ComplexField& f, M&& m) {
  Spectrum s = forward_fft(f);
  const Grid2D& g = f.grid;
  for (int j = 0; j < g.ny(); ++j) {
    const double ky = g.wavenumber(1, j);
    for (int i = 0; i < g.nx(); ++i) s.at(i, j) *= m(i, j, g.wavenumber(0, i), ky);
  }
  return inverse_fft(s);
}

// Odd derivatives of the Nyquist mode are not representable; drop them.
bool nyquist_in(const Grid2D& g, int axis, int i, int j) {
  return g.is_nyquist(axis, axis == 0 ? i : j);
}

}  // namespace

ComplexField apply_multiplier(const ComplexField& f,
                              const std::function<cplx(double, double)>& m) {
  return multiply_spectrum(f, [&](int, int, double kx, double ky) { return m(kx, ky); });
}

RealField apply_multiplier_real(const RealField& f,
                                const std::function<cplx(double, double)>& m) {
  return real_part(apply_multiplier(to_complex(f), m));
}

ComplexField derivative(const ComplexField& f, int axis) {
  require(axis == 0 || axis == 1, "axis must be 0 or 1");
  const Grid2D& g = f.grid;
  return multiply_spectrum(f, [&](int i, int j, double kx, double ky) {
    if (nyquist_in(g, axis, i, j)) return cplx{};
    return cplx(0.0, axis == 0 ? kx : ky);
  });
}

RealField derivative(const RealField& f, int axis) {
  return real_part(derivative(to_complex(f), axis));
}

ComplexField laplacian(const ComplexField& f) {
  return multiply_spectrum(f, [](int, int, double kx, double ky) {
    return cplx(-(kx * kx + ky * ky), 0.0);
  });
}

RealField laplacian(const RealField& f) { return real_part(laplacian(to_complex(f))); }

ComplexField dealias(const ComplexField& f) {
  const Grid2D& g = f.grid;
  return multiply_spectrum(f, [&](int i, int j, double, double) {
    return g.dealias_keep(i, j) ? cplx(1.0) : cplx{};
  });
}

RealField dealias(const RealField& f) { return real_part(dealias(to_complex(f))); }

PoissonSolution<ComplexField> inverse_laplacian(const ComplexField& f,
                                                const InverseLaplacianOptions& opt) {
  const cplx m = mean(f);
  if (!opt.project_mean && std::abs(m) > opt.tol_mean * rms(f)) {
    fail(ErrorCode::NonzeroMean, "inverse_laplacian: source has nonzero mean " +
                                     std::to_string(std::abs(m)));
  }
  ComplexField g = multiply_spectrum(f, [](int i, int j, double kx, double ky) {
    if (i == 0 && j == 0) return cplx{};
    return cplx(-1.0 / (kx * kx + ky * ky), 0.0);
  });
  return {std::move(g), m};
}

PoissonSolution<RealField> inverse_laplacian(const RealField& f,
                                             const InverseLaplacianOptions& opt) {
  auto sol = inverse_laplacian(to_complex(f), opt);
  return {real_part(sol.field), sol.removed_mean.real()};
}

ComplexField riesz_transform(const ComplexField& f, int axis) {
  require(axis == 0 || axis == 1, "axis must be 0 or 1");
  return multiply_spectrum(f, [axis](int, int, double kx, double ky) {
    const double r = std::hypot(kx, ky);
    if (r == 0.0) return cplx{};
    return cplx((axis == 0 ? kx : ky) / r, 0.0);
  });
}

namespace {

double bump_tail(double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); }

}  // namespace

double lp_cutoff(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = bump_tail(2.0 - r);
  const double b = bump_tail(r - 1.0);
  return a / (a + b);
}

double lp_symbol(double R, double r) {
  if (R == 0.0) return lp_cutoff(2.0 * r);
  return lp_cutoff(r / R) - lp_cutoff(2.0 * r / R);
}

std::vector<double> lp_levels(const Grid2D& g) {
  const double kmax_x = g.fundamental() * (g.nx() / 2);
  const double kmax_y = g.is_line() ? 0.0 : g.fundamental() * (g.ny() / 2);
  const double kmax = std::hypot(kmax_x, kmax_y);
  std::vector<double> levels{0.0};
  double R = 1.0;
  levels.push_back(R);
  while (R < kmax) {
    R *= 2.0;
    levels.push_back(R);
  }
  return levels;
}

ComplexField lp_project(const ComplexField& f, double R) {
  require(R == 0.0 || (R >= 1.0 && std::exp2(std::round(std::log2(R))) == R),
          "Littlewood-Paley level must be 0 or a power of two >= 1");
  return multiply_spectrum(f, [R](int, int, double kx, double ky) {
    return cplx(lp_symbol(R, std::hypot(kx, ky)), 0.0);
  });
}

double sobolev_norm(const ComplexField& f, double s) {
  const Spectrum sp = forward_fft(f);
  const Grid2D& g = f.grid;
  double acc = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    const double ky = g.wavenumber(1, j);
    for (int i = 0; i < g.nx(); ++i) {
      const double kx = g.wavenumber(0, i);
      const double w = std::pow(1.0 + kx * kx + ky * ky, s);
      acc += w * std::norm(sp.at(i, j));
    }
  }
  return std::sqrt(acc * g.cell_measure() / static_cast<double>(g.size()));
}

double sobolev_norm(const RealField& f, double s) { return sobolev_norm(to_complex(f), s); }

namespace {

// Contribution of source index i (size n) to target indices (size m).
// Returns pairs (target index, weight).
std::vector<std::pair<int, double>> remap_index(int i, int n, int m) {
  if (n == 1) return {{0, 1.0}};
  const int k = i < n / 2 ? i : i - n;
  if (m >= n) {
    if (k == -n / 2 && m > n) {
      // Split the Nyquist coefficient between +n/2 and -n/2.
      return {{n / 2, 0.5}, {m - n / 2, 0.5}};
    }
    return {{k >= 0 ? k : k + m, 1.0}};
  }
  // Coarsening: keep |k| < m/2, fold +-m/2 into the target Nyquist index.
  if (k > m / 2 || k < -m / 2) return {};
  if (k == m / 2 || k == -m / 2) return {{m / 2, 1.0}};
  return {{k >= 0 ? k : k + m, 1.0}};
}

}  // namespace

ComplexField resample(const ComplexField& f, int n) {
  const Grid2D& src = f.grid;
  const Grid2D dst = src.is_line() ? Grid2D::line(n, src.length()) : Grid2D(n, src.length());
  const Spectrum in = forward_fft(f);
  Spectrum out(dst);
  const double scale = static_cast<double>(dst.size()) / static_cast<double>(src.size());
  for (int j = 0; j < src.ny(); ++j) {
    const auto jy = remap_index(j, src.ny(), dst.ny());
    for (int i = 0; i < src.nx(); ++i) {
      const auto ix = remap_index(i, src.nx(), dst.nx());
      for (auto [ti, wi] : ix)
        for (auto [tj, wj] : jy) out.at(ti, tj) += wi * wj * scale * in.at(i, j);
    }
  }
  return inverse_fft(out);
}

RealField resample(const RealField& f, int n) { return real_part(resample(to_complex(f), n)); }

}  // namespace msmlab
