#include "core/xsb.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "core/error.hpp"
#include "core/fft.hpp"
#include "core/parallel.hpp"

namespace msmlab {

namespace {

double product_of_norms(const std::vector<const SpaceTimeField*>& us, double s, double b) {
  double p = 1.0;
  for (const auto* u : us) p *= xsb_norm(*u, s, b);
  return p;
}

// i xi_axis / (-|xi|^2), zero at the origin and on the Nyquist line of the axis.
SpaceTimeField grad_inverse_laplacian(const SpaceTimeField& f, int axis) {
  const Grid2D& g = f.grid;
  const double nyq = 0.5 * g.nx() * g.fundamental();
  return apply_spatial_multiplier(f, [axis, nyq](double kx, double ky) -> cplx {
    const double k2 = kx * kx + ky * ky;
    const double ka = axis == 0 ? kx : ky;
    if (k2 == 0.0 || std::abs(std::abs(ka) - nyq) < 1e-9 * nyq) return 0.0;
    return cplx(0.0, -ka / k2);
  });
}

SpaceTimeField spatial_derivative(const SpaceTimeField& f, int axis) {
  const Grid2D& g = f.grid;
  const double nyq = 0.5 * g.nx() * g.fundamental();
  return apply_spatial_multiplier(f, [axis, nyq](double kx, double ky) -> cplx {
    const double ka = axis == 0 ? kx : ky;
    if (std::abs(std::abs(ka) - nyq) < 1e-9 * nyq) return 0.0;
    return cplx(0.0, ka);
  });
}

}  // namespace

const char* to_string(CubicVariant v) {
  switch (v) {
    case CubicVariant::ConjMiddle: return "u1_cu2_u3";
    case CubicVariant::ConjPair: return "u1_cu2_cu3";
    case CubicVariant::NoConj: return "u1_u2_u3";
  }
  return "unknown";
}

SpaceTimeField cubic_form(const SpaceTimeField& u1, const SpaceTimeField& u2,
                          const SpaceTimeField& u3, CubicVariant variant) {
  switch (variant) {
    case CubicVariant::ConjMiddle: return dealias_spacetime(u1 * conj(u2) * u3);
    case CubicVariant::ConjPair: return dealias_spacetime(u1 * conj(u2) * conj(u3));
    case CubicVariant::NoConj: return dealias_spacetime(u1 * u2 * u3);
  }
  fail(ErrorCode::InvalidArgument, "unknown cubic variant");
}

double cubic_ratio(const SpaceTimeField& u1, const SpaceTimeField& u2, const SpaceTimeField& u3,
                   CubicVariant variant, double s, double eps) {
  const double den = product_of_norms({&u1, &u2, &u3}, s, 0.5 + eps);
  if (den == 0.0) return 0.0;
  return xsb_norm(cubic_form(u1, u2, u3, variant), s, -0.5 + 2.0 * eps) / den;
}

SpaceTimeField quintic_form(const SpaceTimeField& u1, const SpaceTimeField& u2,
                            const SpaceTimeField& u3, const SpaceTimeField& u4,
                            const SpaceTimeField& u5) {
  const SpaceTimeField a = u1 * conj(u2);
  const SpaceTimeField b = u3 * conj(u4);
  SpaceTimeField dot = grad_inverse_laplacian(a, 0) * grad_inverse_laplacian(b, 0);
  dot = dot + grad_inverse_laplacian(a, 1) * grad_inverse_laplacian(b, 1);
  return dealias_spacetime(dot * u5);
}

double quintic_ratio(const SpaceTimeField& u1, const SpaceTimeField& u2, const SpaceTimeField& u3,
                     const SpaceTimeField& u4, const SpaceTimeField& u5, double s, double eps) {
  const double den = product_of_norms({&u1, &u2, &u3, &u4, &u5}, s, 0.5 + eps);
  if (den == 0.0) return 0.0;
  return xsb_norm(quintic_form(u1, u2, u3, u4, u5), s, -0.5 + 2.0 * eps) / den;
}

SpaceTimeField null_form_potential(const SpaceTimeField& u1, const SpaceTimeField& u2) {
  require_same_shape(u1, u2);
  SpaceTimeField src = u1;
  for (std::size_t p = 0; p < src.size(); ++p) {
    const cplx a = u1.values[p];
    const cplx b = u2.values[p];
    src.values[p] = 2.0 * (a.imag() * b.real() - a.real() * b.imag());
  }
  const Grid2D& g = u1.grid;
  std::vector<cplx> c = spacetime_fft(src);
  for (int k = 0; k < src.nt; ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        cplx& v = c[src.index(i, j, k)];
        const double kx = g.wavenumber(0, i);
        const double ky = g.wavenumber(1, j);
        const double k2 = kx * kx + ky * ky;
        v = (k2 == 0.0 || !g.dealias_keep(i, j)) ? cplx{} : -v / k2;
      }
  SpaceTimeField beta = spacetime_ifft(g, src.nt, src.t_window, std::move(c));
  for (auto& v : beta.values) v = v.real();
  beta.cutoff = src.cutoff;
  return beta;
}

double NullFormValue::relative_defect() const {
  const double scale = std::max(std::abs(direct), std::abs(parts));
  return scale == 0.0 ? 0.0 : std::abs(direct - parts) / scale;
}

NullFormValue null_form_pairing(const SpaceTimeField& u1, const SpaceTimeField& u2,
                                const SpaceTimeField& u3, const SpaceTimeField& w) {
  require_same_shape(u3, w);
  const SpaceTimeField beta = null_form_potential(u1, u2);
  const SpaceTimeField wbar = conj(w);
  const SpaceTimeField d1u = spatial_derivative(u3, 0);
  const SpaceTimeField d2u = spatial_derivative(u3, 1);
  const SpaceTimeField d1b = spatial_derivative(beta, 0);
  const SpaceTimeField d2b = spatial_derivative(beta, 1);
  const SpaceTimeField d1w = spatial_derivative(wbar, 0);
  const SpaceTimeField d2w = spatial_derivative(wbar, 1);
  SpaceTimeField ones = u3;
  std::fill(ones.values.begin(), ones.values.end(), cplx(1.0));
  NullFormValue out;
  out.direct = spacetime_pairing((d1b * d2u - d2b * d1u) * wbar, ones);
  out.parts = spacetime_pairing(beta * (d2w * d1u - d1w * d2u), ones);
  return out;
}

double null_form_ratio(const SpaceTimeField& u1, const SpaceTimeField& u2,
                       const SpaceTimeField& u3, const SpaceTimeField& w, double s, double eps) {
  const double den = product_of_norms({&u1, &u2, &u3}, s, 0.5 + eps) *
                     xsb_norm(w, -s, 0.5 - 2.0 * eps, XsbSign::Minus);
  if (den == 0.0) return 0.0;
  return std::abs(null_form_pairing(u1, u2, u3, w).direct) / den;
}

BilinearRatios bilinear_ratios(const SpaceTimeField& u, const SpaceTimeField& v, double p,
                               double eps) {
  require(p >= 1.0 && p <= 2.0, "bilinear exponent p must lie in [1, 2]");
  const double inf = std::numeric_limits<double>::infinity();
  const double pp = p == 1.0 ? inf : p / (p - 1.0);
  BilinearRatios r;
  const double nu0 = xsb_norm(u, 0.0, 0.5 + eps);
  const double nv0 = xsb_norm(v, 0.0, 0.5 + eps);
  if (nu0 > 0.0 && nv0 > 0.0) {
    r.product = mixed_norm(u * v, pp, p) / (nu0 * nv0);
    r.embedding = mixed_norm(u, pp == inf ? inf : 2.0 * pp, 2.0 * p) / nu0;
    const double den = xsb_norm(u, eps, 0.5 + eps) * xsb_norm(v, eps, 0.5 + eps);
    r.conj_product = mixed_norm(u * conj(v), pp, p) / den;
  }
  return r;
}

double sup_time_l2(const SpaceTimeField& u) {
  return mixed_norm(u, std::numeric_limits<double>::infinity(), 2.0);
}

double sup_time_l2_constant(const Grid2D& g, int nt, double t_window, double s, double b) {
  double worst = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      double acc = 0.0;
      for (int k = 0; k < nt; ++k)
        acc += 1.0 / xsb_weight_sq(g, nt, t_window, i, j, k, s, b, XsbSign::Plus);
      worst = std::max(worst, acc);
    }
  return std::sqrt(worst / t_window);
}

const char* to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::White: return "white";
    case EnsembleKind::Paraboloid: return "paraboloid";
    case EnsembleKind::Separated: return "separated";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
  if (name == "white") return EnsembleKind::White;
  if (name == "paraboloid") return EnsembleKind::Paraboloid;
  if (name == "separated") return EnsembleKind::Separated;
  fail(ErrorCode::InvalidArgument, "unknown ensemble kind: " + name);
}

int ensemble_band(int n) { return std::max(2, n / 8); }

SpaceTimeField ensemble_member(const EnsembleSpec& spec, unsigned long member_seed, int slot) {
  const Grid2D g(spec.n, spec.length);
  std::seed_seq seq{static_cast<unsigned long>(spec.kind), member_seed,
                    static_cast<unsigned long>(slot)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Members cycle through dyadic band radii capped by the grid. Coefficients
  // are drawn per signed mode in a fixed order, so a member whose radius fits
  // on two grids is the same function on both.
  const int first = spec.kind == EnsembleKind::Separated ? 2 : 1;
  const int band = std::min(first << (member_seed % 4), std::max(first, ensemble_band(spec.n)));
  double rmin = 0.0;
  double rmax = band;
  if (spec.kind == EnsembleKind::Separated) {
    if (slot % 2 == 0) {
      rmax = std::max(1, band / 4);
    } else {
      rmin = 0.5 * band + 0.25;
    }
  }
  auto wrap = [](int m, int n) { return m < 0 ? m + n : m; };
  const double delta = 0.5 * spec.t_window;
  if (spec.kind == EnsembleKind::White) {
    SpaceTimeField u(g, spec.nt, spec.t_window);
    std::vector<cplx> c(u.size());
    const int tband = std::min(spec.nt / 8, 8);
    for (int mt = -tband; mt <= tband; ++mt)
      for (int my = -band; my <= band; ++my)
        for (int mx = -band; mx <= band; ++mx) {
          const double re = gauss(rng);
          const double im = gauss(rng);
          const double r = std::hypot(mx, my);
          if (r >= rmin && r <= rmax)
            c[u.index(wrap(mx, g.nx()), wrap(my, g.ny()), wrap(mt, spec.nt))] = cplx(re, im);
        }
    u = spacetime_ifft(g, spec.nt, spec.t_window, std::move(c));
    apply_time_cutoff(u, delta);
    return u;
  }
  Spectrum s0(g);
  for (int my = -band; my <= band; ++my)
    for (int mx = -band; mx <= band; ++mx) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      const double r = std::hypot(mx, my);
      if (r >= rmin && r <= rmax) s0.at(wrap(mx, g.nx()), wrap(my, g.ny())) = cplx(re, im);
    }
  return free_evolution(inverse_fft(s0), spec.nt, spec.t_window, delta);
}

RatioSuiteReport run_ratio_suite(const EnsembleSpec& spec, double s, double eps) {
  require(spec.size >= 1, "ensemble size must be positive");
  require(s > 5.0 * eps, "ratio suite requires s > 5 eps");
  static const std::vector<std::string> names = {
      "cubic_u1_cu2_u3", "cubic_u1_cu2_cu3", "cubic_u1_u2_u3",   "quintic",
      "nullform",        "bilinear_uv_p1",   "bilinear_ucv_p1",  "embedding_p1",
      "bilinear_uv_p2",  "bilinear_ucv_p2",  "embedding_p2"};
  const std::size_t members = static_cast<std::size_t>(spec.size);
  std::vector<std::vector<double>> ratios(members);
  std::vector<double> defects(members, 0.0);
  parallel_for(members, [&](std::size_t m) {
    const unsigned long seed = spec.seed + m;
    std::vector<SpaceTimeField> u;
    for (int slot = 0; slot < 6; ++slot) u.push_back(ensemble_member(spec, seed, slot));
    const SpaceTimeField w = conj(u[5]);
    std::vector<double>& r = ratios[m];
    r.push_back(cubic_ratio(u[0], u[1], u[2], CubicVariant::ConjMiddle, s, eps));
    r.push_back(cubic_ratio(u[0], u[1], u[2], CubicVariant::ConjPair, s, eps));
    r.push_back(cubic_ratio(u[0], u[1], u[2], CubicVariant::NoConj, s, eps));
    r.push_back(quintic_ratio(u[0], u[1], u[2], u[3], u[4], s, eps));
    r.push_back(null_form_ratio(u[0], u[1], u[2], w, s, eps));
    defects[m] = null_form_pairing(u[0], u[1], u[2], w).relative_defect();
    for (double p : {1.0, 2.0}) {
      const BilinearRatios b = bilinear_ratios(u[0], u[1], p, eps);
      r.push_back(b.product);
      r.push_back(b.conj_product);
      r.push_back(b.embedding);
    }
  });
  RatioSuiteReport report;
  for (std::size_t t = 0; t < names.size(); ++t) {
    RatioRecord rec;
    rec.test_name = names[t] + "/" + to_string(spec.kind);
    rec.n = spec.n;
    rec.nt = spec.nt;
    rec.eps = eps;
    rec.s = s;
    rec.ensemble_size = spec.size;
    for (std::size_t m = 0; m < members; ++m)
      if (ratios[m][t] > rec.max_ratio) {
        rec.max_ratio = ratios[m][t];
        rec.argmax_seed = spec.seed + m;
      }
    report.records.push_back(rec);
  }
  report.max_null_form_defect = *std::max_element(defects.begin(), defects.end());
  return report;
}

std::string ratio_csv(const std::vector<RatioRecord>& records) {
  std::ostringstream os;
  os << "test_name,grid,nt,eps,s,ensemble_size,max_ratio,argmax_seed\n";
  os << std::setprecision(12);
  for (const auto& r : records)
    os << r.test_name << ',' << r.n << ',' << r.nt << ',' << r.eps << ',' << r.s << ','
       << r.ensemble_size << ',' << r.max_ratio << ',' << r.argmax_seed << '\n';
  return os.str();
}

}  // namespace msmlab
