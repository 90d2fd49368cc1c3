#include "core/msm.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "core/error.hpp"
#include "core/fft.hpp"

namespace msmlab {

MsmCoefficients MsmCoefficients::derived(TargetSign t) {
  const double sg = sigma(t);
  return {-4.0 * sg, 4.0 * sg, -4.0 * sg, 0.5};
}

MsmCoefficients MsmCoefficients::printed(TargetSign t) {
  const double sg = sigma(t);
  return {2.0 * sg, sg, 2.0 * sg, 1.0};
}

RealField im_product(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid);
  RealField out(a.grid);
  for (std::size_t k = 0; k < a.size(); ++k)
    out[k] = a[k].imag() * b[k].real() - a[k].real() * b[k].imag();
  return out;
}

double mass(const MsmState& s) {
  const double a = l2_norm(s.u1), b = l2_norm(s.u2);
  return a * a + b * b;
}

namespace {

RealField maybe_dealias(const RealField& f, bool on) { return on ? dealias(f) : f; }
ComplexField maybe_dealias(const ComplexField& f, bool on) { return on ? dealias(f) : f; }

RealField re_product(const ComplexField& a, const ComplexField& b) {
  RealField out(a.grid);
  for (std::size_t k = 0; k < a.size(); ++k)
    out[k] = a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
  return out;
}

RealField modulus_squared(const ComplexField& a, const ComplexField& b) {
  RealField out(a.grid);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = std::norm(a[k]) + std::norm(b[k]);
  return out;
}

PoissonSolution<RealField> beta_impl(const ComplexField& u1, const ComplexField& u2,
                                     const MsmCoefficients& c, const PotentialOptions& opt,
                                     bool dealias_source) {
  require_same_grid(u1.grid, u2.grid);
  RealField src = maybe_dealias(im_product(u1, u2), dealias_source);
  for (auto& v : src.values) v *= c.beta;
  InverseLaplacianOptions io;
  io.project_mean = opt.project_mean;
  return inverse_laplacian(src, io);
}

}  // namespace

PoissonSolution<RealField> compute_beta(const ComplexField& u1, const ComplexField& u2,
                                        const MsmCoefficients& c, const PotentialOptions& opt) {
  return beta_impl(u1, u2, c, opt, false);
}

RealField compute_alpha(const ComplexField& u1, const ComplexField& u2, const MsmCoefficients& c) {
  require_same_grid(u1.grid, u2.grid);
  const std::array<const ComplexField*, 2> u{&u1, &u2};
  RealField src(u1.grid);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j) {
      const RealField r = re_product(*u[k], *u[j]);
      src = src + derivative(derivative(r, j), k);
    }
  const RealField lap = laplacian(modulus_squared(u1, u2));
  src = src - c.trace * lap;
  src = c.alpha * src;
  InverseLaplacianOptions io;
  io.project_mean = true;
  return inverse_laplacian(src, io).field;
}

RealField compute_alpha_riesz(const ComplexField& u1, const ComplexField& u2,
                              const MsmCoefficients& c) {
  require_same_grid(u1.grid, u2.grid);
  const std::array<const ComplexField*, 2> u{&u1, &u2};
  ComplexField pairs(u1.grid);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      pairs = pairs + riesz_transform(riesz_transform(to_complex(re_product(*u[k], *u[j])), k), j);
  const RealField acc = real_part(pairs);
  RealField m2 = modulus_squared(u1, u2);
  const double mu = mean(m2);
  for (auto& v : m2.values) v -= mu;
  return c.alpha * (acc - c.trace * m2);
}

ComplexField NonlinearTerms::total(int j) const {
  const auto idx = static_cast<std::size_t>(j);
  return null_form[idx] + alpha_term[idx] + cubic[idx] + quintic[idx] + background[idx];
}

NonlinearTerms nonlinear_terms(const ComplexField& u1, const ComplexField& u2,
                               const MsmCoefficients& c, const BackgroundConnection& bg,
                               const TermOptions& opt) {
  require_same_grid(u1.grid, u2.grid);
  const bool da = opt.dealias;
  const Grid2D& g = u1.grid;
  const RealField beta = beta_impl(u1, u2, c, opt.potentials, da).field;
  const RealField b1 = derivative(beta, 0);
  const RealField b2 = derivative(beta, 1);
  const RealField alpha = maybe_dealias(compute_alpha(u1, u2, c), da);
  RealField grad2 = maybe_dealias(b1 * b1 + b2 * b2, da);
  // Cross term 2 a_bg . (d2 beta, -d1 beta) from expanding |a|^2.
  RealField cross = 2.0 * (bg.a1 * b2 - bg.a2 * b1);

  const std::array<const ComplexField*, 2> u{&u1, &u2};
  NonlinearTerms t{{ComplexField(g), ComplexField(g)}, {ComplexField(g), ComplexField(g)},
                   {ComplexField(g), ComplexField(g)}, {ComplexField(g), ComplexField(g)},
                   {ComplexField(g), ComplexField(g)}};
  const cplx I(0.0, 1.0);
  for (std::size_t j = 0; j < 2; ++j) {
    const ComplexField& uj = *u[j];
    const ComplexField& uk = *u[1 - j];
    const ComplexField d1 = derivative(uj, 0);
    const ComplexField d2 = derivative(uj, 1);
    t.null_form[j] = maybe_dealias(2.0 * (b1 * d2) - 2.0 * (b2 * d1), da);
    t.alpha_term[j] = maybe_dealias((-I) * (alpha * uj), da);
    t.quintic[j] = maybe_dealias((-I) * (grad2 * uj), da);
    const RealField im = maybe_dealias(im_product(uk, uj), da);
    t.cubic[j] = maybe_dealias(c.cubic * (im * uk), da);
    if (bg.a1 != 0.0 || bg.a2 != 0.0) t.background[j] = maybe_dealias((-I) * (cross * uj), da);
  }
  return t;
}

namespace {

std::vector<cplx> linear_symbol(const Grid2D& g, const BackgroundConnection& bg) {
  std::vector<cplx> sym(g.size());
  for (int j = 0; j < g.ny(); ++j) {
    const double ky = g.wavenumber(1, j) + bg.a2;
    for (int i = 0; i < g.nx(); ++i) {
      const double kx = g.wavenumber(0, i) + bg.a1;
      sym[g.index(i, j)] = cplx(0.0, -(kx * kx + ky * ky + bg.a0));
    }
  }
  return sym;
}

ComplexField apply_diagonal(const ComplexField& f, const std::vector<cplx>& d) {
  Spectrum s = forward_fft(f);
  for (std::size_t k = 0; k < d.size(); ++k) s.coeffs[k] *= d[k];
  return inverse_fft(s);
}

std::vector<cplx> exp_symbol(const std::vector<cplx>& sym, double t) {
  std::vector<cplx> e(sym.size());
  for (std::size_t k = 0; k < sym.size(); ++k) e[k] = std::exp(t * sym[k]);
  return e;
}

}  // namespace

ComplexField linear_term(const ComplexField& u, const BackgroundConnection& bg) {
  return apply_diagonal(u, linear_symbol(u.grid, bg));
}

std::array<ComplexField, 2> msm_rhs(const ComplexField& u1, const ComplexField& u2,
                                    const MsmCoefficients& c, const BackgroundConnection& bg,
                                    const TermOptions& opt) {
  const NonlinearTerms t = nonlinear_terms(u1, u2, c, bg, opt);
  return {linear_term(u1, bg) + t.total(0), linear_term(u2, bg) + t.total(1)};
}

ComplexField quintic_form(const ComplexField& ua, const ComplexField& ub, const ComplexField& uc,
                          const ComplexField& ud, const ComplexField& ue) {
  InverseLaplacianOptions io;
  io.project_mean = true;
  const ComplexField p = inverse_laplacian(ua * conj(ub), io).field;
  const ComplexField q = inverse_laplacian(uc * conj(ud), io).field;
  const ComplexField dot = derivative(p, 0) * derivative(q, 0) + derivative(p, 1) * derivative(q, 1);
  return dot * ue;
}

Scheme parse_scheme(const std::string& name) {
  if (name == "strang_split" || name == "strang") return Scheme::StrangSplit;
  if (name == "etd_rk4") return Scheme::EtdRk4;
  if (name == "picard_duhamel") return Scheme::PicardDuhamel;
  fail(ErrorCode::InvalidArgument, "unknown scheme '" + name + "'");
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::StrangSplit: return "strang_split";
    case Scheme::EtdRk4: return "etd_rk4";
    case Scheme::PicardDuhamel: return "picard_duhamel";
  }
  return "unknown";
}

void validate(const SolverConfig& cfg) {
  require(cfg.dt > 0.0 && std::isfinite(cfg.dt), "dt must be positive");
  require(cfg.t_final >= 0.0, "t_final must be nonnegative");
  require(cfg.picard_max_iters > 0, "picard_max_iters must be positive");
  require(cfg.picard_tol > 0.0, "picard_tol must be positive");
  require(cfg.epsilon > 0.0, "epsilon must be positive");
}

namespace {

using Pair = std::array<ComplexField, 2>;

Pair nonlinear(const Pair& u, const SolverConfig& cfg) {
  if (cfg.linear_only) return {ComplexField(u[0].grid), ComplexField(u[0].grid)};
  TermOptions opt;
  opt.dealias = cfg.dealias;
  const NonlinearTerms t = nonlinear_terms(u[0], u[1], cfg.coefficients, cfg.background, opt);
  return {t.total(0), t.total(1)};
}

Pair axpy(const Pair& x, cplx a, const Pair& y) {
  return {x[0] + a * y[0], x[1] + a * y[1]};
}

Pair diag(const Pair& u, const std::vector<cplx>& d) {
  return {apply_diagonal(u[0], d), apply_diagonal(u[1], d)};
}

Pair strang(const Pair& u, double dt, const SolverConfig& cfg) {
  const auto half = exp_symbol(linear_symbol(u[0].grid, cfg.background), 0.5 * dt);
  Pair v = diag(u, half);
  const Pair mid = axpy(v, 0.5 * dt, nonlinear(v, cfg));
  v = axpy(v, dt, nonlinear(mid, cfg));
  return diag(v, half);
}

struct EtdCoefficients {
  std::vector<cplx> e, e2, q, f1, f2, f3;
};

EtdCoefficients etd_coefficients(const Grid2D& g, double dt, const BackgroundConnection& bg) {
  const auto sym = linear_symbol(g, bg);
  const int M = 32;
  EtdCoefficients c;
  for (auto* v : {&c.e, &c.e2, &c.q, &c.f1, &c.f2, &c.f3}) v->resize(sym.size());
  for (std::size_t k = 0; k < sym.size(); ++k) {
    const cplx z = dt * sym[k];
    c.e[k] = std::exp(z);
    c.e2[k] = std::exp(0.5 * z);
    cplx q{}, f1{}, f2{}, f3{};
    for (int m = 0; m < M; ++m) {
      const cplx w = z + std::polar(1.0, 2.0 * std::numbers::pi * (m + 0.5) / M);
      const cplx ew = std::exp(w), ew2 = std::exp(0.5 * w);
      const cplx w3 = w * w * w;
      q += (ew2 - 1.0) / w;
      f1 += (-4.0 - w + ew * (4.0 - 3.0 * w + w * w)) / w3;
      f2 += (2.0 + w + ew * (w - 2.0)) / w3;
      f3 += (-4.0 - 3.0 * w - w * w + ew * (4.0 - w)) / w3;
    }
    c.q[k] = dt * q / double(M);
    c.f1[k] = dt * f1 / double(M);
    c.f2[k] = dt * f2 / double(M);
    c.f3[k] = dt * f3 / double(M);
  }
  return c;
}

const EtdCoefficients& cached_etd(const Grid2D& g, double dt, const BackgroundConnection& bg) {
  using Key = std::tuple<int, int, double, double, double, double, double>;
  static std::mutex mutex;
  static std::map<Key, EtdCoefficients> cache;
  const Key key{g.nx(), g.ny(), g.length(), dt, bg.a1, bg.a2, bg.a0};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (cache.size() > 16) cache.clear();
    it = cache.emplace(key, etd_coefficients(g, dt, bg)).first;
  }
  return it->second;
}

// Applies d to the spectrum of a and adds it to the spectrum of acc.
void accumulate(Spectrum& acc, const std::vector<cplx>& d, const ComplexField& a) {
  const Spectrum s = forward_fft(a);
  for (std::size_t k = 0; k < d.size(); ++k) acc.coeffs[k] += d[k] * s.coeffs[k];
}

ComplexField combine(const std::vector<std::pair<const std::vector<cplx>*, const ComplexField*>>& terms) {
  Spectrum acc(terms.front().second->grid);
  for (auto [d, f] : terms) accumulate(acc, *d, *f);
  return inverse_fft(acc);
}

Pair etd_rk4(const Pair& u, double dt, const SolverConfig& cfg) {
  const EtdCoefficients& c = cached_etd(u[0].grid, dt, cfg.background);
  const Pair nu = nonlinear(u, cfg);
  const Grid2D& g = u[0].grid;
  Pair a{ComplexField(g), ComplexField(g)}, b = a, cc = a, out = a;
  for (std::size_t j = 0; j < 2; ++j) a[j] = combine({{&c.e2, &u[j]}, {&c.q, &nu[j]}});
  const Pair na = nonlinear(a, cfg);
  for (std::size_t j = 0; j < 2; ++j) b[j] = combine({{&c.e2, &u[j]}, {&c.q, &na[j]}});
  const Pair nb = nonlinear(b, cfg);
  for (std::size_t j = 0; j < 2; ++j) {
    const ComplexField w = 2.0 * nb[j] - nu[j];
    cc[j] = combine({{&c.e2, &a[j]}, {&c.q, &w}});
  }
  const Pair nc = nonlinear(cc, cfg);
  for (std::size_t j = 0; j < 2; ++j) {
    const ComplexField ab = na[j] + nb[j];
    std::vector<cplx> two_f2(c.f2.size());
    for (std::size_t k = 0; k < two_f2.size(); ++k) two_f2[k] = 2.0 * c.f2[k];
    out[j] = combine({{&c.e, &u[j]}, {&c.f1, &nu[j]}, {&two_f2, &ab}, {&c.f3, &nc[j]}});
  }
  return out;
}

double sup_distance(const Pair& a, const Pair& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < a[j].size(); ++k) {
      const double d = std::abs(a[j][k] - b[j][k]);
      if (!(d <= m)) m = d;
    }
  return m;
}

double sup_norm(const Pair& a) { return std::max(max_abs(a[0]), max_abs(a[1])); }

// Duhamel formula in the interaction picture v(r) = exp(-rL) u(r), with the
// integral sampled at r = 0, dt/2, dt and Picard iteration on the two
// unknown nodes.
Pair picard(const Pair& u, double dt, const SolverConfig& cfg) {
  const auto sym = linear_symbol(u[0].grid, cfg.background);
  const auto eh = exp_symbol(sym, 0.5 * dt), ef = exp_symbol(sym, dt);
  const auto ieh = exp_symbol(sym, -0.5 * dt), ief = exp_symbol(sym, -dt);
  auto g_at = [&](const Pair& v, const std::vector<cplx>& fwd, const std::vector<cplx>& back) {
    return diag(nonlinear(diag(v, fwd), cfg), back);
  };
  const Pair g0 = nonlinear(u, cfg);
  Pair vh = u, vf = u;
  std::vector<double> trace;
  const double scale = std::max(sup_norm(u), 1e-300);
  for (int it = 0; it < cfg.picard_max_iters; ++it) {
    const Pair gh = g_at(vh, eh, ieh);
    const Pair gf = g_at(vf, ef, ief);
    Pair nh = u, nf = u;
    for (std::size_t j = 0; j < 2; ++j) {
      nh[j] = nh[j] + (dt * 5.0 / 24.0) * g0[j] + (dt / 3.0) * gh[j] + (-dt / 24.0) * gf[j];
      nf[j] = nf[j] + (dt / 6.0) * g0[j] + (dt * 4.0 / 6.0) * gh[j] + (dt / 6.0) * gf[j];
    }
    const double inc = std::max(sup_distance(nh, vh), sup_distance(nf, vf)) / scale;
    trace.push_back(inc);
    vh = std::move(nh);
    vf = std::move(nf);
    if (!std::isfinite(inc)) break;
    if (inc <= cfg.picard_tol) return diag(vf, ef);
  }
  throw PicardDivergedError("Picard iteration did not converge in " +
                                std::to_string(trace.size()) + " iterations",
                            std::move(trace));
}

}  // namespace

MsmState step(const MsmState& s, const SolverConfig& cfg) {
  validate(cfg);
  require_same_grid(s.u1.grid, s.u2.grid);
  const Pair u{s.u1, s.u2};
  Pair next = [&] {
    switch (cfg.scheme) {
      case Scheme::EtdRk4: return etd_rk4(u, cfg.dt, cfg);
      case Scheme::PicardDuhamel: return picard(u, cfg.dt, cfg);
      case Scheme::StrangSplit: break;
    }
    return strang(u, cfg.dt, cfg);
  }();
  if (!all_finite(next[0]) || !all_finite(next[1]))
    fail(ErrorCode::NoConvergence, "solution became non-finite at t = " + std::to_string(s.t + cfg.dt));
  return {std::move(next[0]), std::move(next[1]), s.t + cfg.dt, s.target};
}

MsmState evolve(const MsmState& s, const SolverConfig& cfg,
                const std::function<bool(const MsmState&)>& observer) {
  validate(cfg);
  MsmState cur = s;
  if (observer && !observer(cur)) return cur;
  const double t_end = s.t + cfg.t_final;
  const auto steps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
  for (long k = 0; k < steps; ++k) {
    SolverConfig c = cfg;
    c.dt = std::min(cfg.dt, t_end - cur.t);
    if (c.dt <= 0.0) break;
    cur = step(cur, c);
    if (!all_finite(cur.u1) || !all_finite(cur.u2))
      fail(ErrorCode::NoConvergence, "solution became non-finite at t = " + std::to_string(cur.t));
    if (observer && !observer(cur)) break;
  }
  return cur;
}

}  // namespace msmlab
