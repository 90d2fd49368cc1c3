#include "core/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "core/error.hpp"
#include "core/parallel.hpp"

namespace msmlab {

using cplx = std::complex<double>;

namespace {

MultiplierSpec group_only(int modulus, int dim) {
  MultiplierSpec g;
  g.modulus = modulus;
  g.dim = dim;
  return g;
}

}  // namespace

int MultiplierSpec::order() const {
  int z = 1;
  for (int i = 0; i < dim; ++i) z *= modulus;
  return z;
}

int MultiplierSpec::add(int a, int b) const {
  int out = 0;
  int place = 1;
  for (int i = 0; i < dim; ++i) {
    out += ((a % modulus + b % modulus) % modulus) * place;
    a /= modulus;
    b /= modulus;
    place *= modulus;
  }
  return out;
}

int MultiplierSpec::negate(int a) const {
  int out = 0;
  int place = 1;
  for (int i = 0; i < dim; ++i) {
    out += ((modulus - a % modulus) % modulus) * place;
    a /= modulus;
    place *= modulus;
  }
  return out;
}

std::vector<int> MultiplierSpec::point(std::size_t p) const {
  const auto z = static_cast<std::size_t>(order());
  std::vector<int> xi(static_cast<std::size_t>(k));
  int sum = 0;
  for (int j = 0; j + 1 < k; ++j) {
    xi[j] = static_cast<int>(p % z);
    p /= z;
    sum = add(sum, xi[j]);
  }
  xi[k - 1] = negate(sum);
  return xi;
}

MultiplierSpec make_multiplier(int k, int modulus, int dim,
                               const std::function<cplx(const std::vector<int>&)>& m) {
  require(k >= 2, "multiplier arity must be at least 2");
  require(modulus >= 2 && dim >= 1, "group must be (Z_N)^d with N >= 2, d >= 1");
  MultiplierSpec spec;
  spec.k = k;
  spec.modulus = modulus;
  spec.dim = dim;
  double points = 1.0;
  for (int j = 0; j + 1 < k; ++j) points *= spec.order();
  if (points > static_cast<double>(kMaxHyperplanePoints))
    fail(ErrorCode::TooLarge, "hyperplane has too many points to enumerate");
  spec.values.resize(static_cast<std::size_t>(points));
  for (std::size_t p = 0; p < spec.values.size(); ++p) {
    spec.values[p] = m(spec.point(p));
    if (!std::isfinite(spec.values[p].real()) || !std::isfinite(spec.values[p].imag()))
      fail(ErrorCode::InvalidArgument, "multiplier values must be finite");
  }
  return spec;
}

MultiplierSpec indicator_multiplier(int modulus, int dim, const std::vector<bool>& a,
                                    const std::vector<bool>& b) {
  const std::size_t z = static_cast<std::size_t>(group_only(modulus, dim).order());
  if (a.size() != z || b.size() != z)
    fail(ErrorCode::ShapeMismatch, "set masks must have one entry per group element");
  return make_multiplier(3, modulus, dim, [&](const std::vector<int>& xi) {
    return (a[static_cast<std::size_t>(xi[0])] && b[static_cast<std::size_t>(xi[1])]) ? cplx(1.0) : cplx(0.0);
  });
}

namespace {

void check_inputs(const MultiplierSpec& m, const std::vector<std::vector<cplx>>& f) {
  if (f.size() != static_cast<std::size_t>(m.k))
    fail(ErrorCode::ShapeMismatch, "need one function per multiplier slot");
  for (const auto& fj : f)
    if (fj.size() != static_cast<std::size_t>(m.order()))
      fail(ErrorCode::ShapeMismatch, "function length must equal the group order");
}

// g(eta) = sum over Gamma with xi_j = eta of m prod_{i != j} f_i(xi_i).
std::vector<cplx> partial_form(const MultiplierSpec& m, const std::vector<std::vector<cplx>>& f,
                               int j) {
  std::vector<cplx> g(static_cast<std::size_t>(m.order()));
  for (std::size_t p = 0; p < m.values.size(); ++p) {
    if (m.values[p] == cplx{}) continue;
    const std::vector<int> xi = m.point(p);
    cplx v = m.values[p];
    for (int i = 0; i < m.k; ++i)
      if (i != j) v *= f[i][xi[i]];
    g[xi[j]] += v;
  }
  return g;
}

double l2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

cplx multilinear_form(const MultiplierSpec& m, const std::vector<std::vector<cplx>>& f) {
  check_inputs(m, f);
  cplx acc{};
  for (std::size_t p = 0; p < m.values.size(); ++p) {
    const std::vector<int> xi = m.point(p);
    cplx v = m.values[p];
    for (int i = 0; i < m.k; ++i) v *= f[i][xi[i]];
    acc += v;
  }
  return acc;
}

double multiplier_upper_bound(const MultiplierSpec& m) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m.k; ++j) {
    std::vector<double> fiber(static_cast<std::size_t>(m.order()), 0.0);
    for (std::size_t p = 0; p < m.values.size(); ++p)
      fiber[m.point(p)[j]] += std::norm(m.values[p]);
    best = std::min(best, std::sqrt(*std::max_element(fiber.begin(), fiber.end())));
  }
  return best;
}

double multiplier_lower_bound(const MultiplierSpec& m, const LowerBoundOptions& opt) {
  require(opt.restarts >= 1 && opt.max_sweeps >= 1, "need at least one restart and sweep");
  const auto z = static_cast<std::size_t>(m.order());
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = 0.0;
  for (int r = 0; r < opt.restarts; ++r) {
    std::vector<std::vector<cplx>> f(static_cast<std::size_t>(m.k), std::vector<cplx>(z));
    for (auto& fj : f) {
      for (auto& v : fj) v = cplx(gauss(rng), gauss(rng));
      const double n = l2(fj);
      for (auto& v : fj) v /= n;
    }
    double value = 0.0;
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
      const double before = value;
      for (int j = 0; j < m.k; ++j) {
        std::vector<cplx> g = partial_form(m, f, j);
        const double n = l2(g);
        value = n;
        if (n == 0.0) break;
        for (std::size_t e = 0; e < z; ++e) f[j][e] = std::conj(g[e]) / n;
      }
      if (value == 0.0 || value - before <= opt.tol * value) break;
    }
    best = std::max(best, value);
  }
  return best;
}

MultiplierBounds multiplier_norm_bounds(const MultiplierSpec& m, const LowerBoundOptions& opt) {
  MultiplierBounds b;
  b.upper = multiplier_upper_bound(m);
  b.lower = multiplier_lower_bound(m, opt);
  return b;
}

std::vector<MultiplierBounds> multiplier_norm_bounds(const std::vector<MultiplierSpec>& specs,
                                                     const LowerBoundOptions& opt) {
  std::vector<MultiplierBounds> out(specs.size());
  parallel_for(specs.size(), [&](std::size_t i) { out[i] = multiplier_norm_bounds(specs[i], opt); });
  return out;
}

double counting_bound(int modulus, int dim, const std::vector<bool>& a, const std::vector<bool>& b) {
  const MultiplierSpec g = group_only(modulus, dim);
  const int z = g.order();
  if (a.size() != static_cast<std::size_t>(z) || b.size() != static_cast<std::size_t>(z))
    fail(ErrorCode::ShapeMismatch, "set masks must have one entry per group element");
  int worst = 0;
  for (int xi = 0; xi < z; ++xi) {
    int count = 0;
    for (int x1 = 0; x1 < z; ++x1)
      if (a[x1] && b[g.add(xi, g.negate(x1))]) ++count;
    worst = std::max(worst, count);
  }
  return std::sqrt(static_cast<double>(worst));
}

double counting_bound(int modulus, int dim, const std::vector<bool>& a, const std::vector<bool>& b,
                      const std::vector<bool>& c) {
  const MultiplierSpec g = group_only(modulus, dim);
  const int z = g.order();
  if (a.size() != static_cast<std::size_t>(z) || b.size() != static_cast<std::size_t>(z) ||
      c.size() != static_cast<std::size_t>(z))
    fail(ErrorCode::ShapeMismatch, "set masks must have one entry per group element");
  int worst = 0;
  for (int xi = 0; xi < z; ++xi) {
    int count = 0;
    for (int x1 = 0; x1 < z; ++x1)
      for (int x2 = 0; x2 < z; ++x2)
        if (a[x1] && b[x2] && c[g.add(xi, g.negate(g.add(x1, x2)))]) ++count;
    worst = std::max(worst, count);
  }
  return std::sqrt(static_cast<double>(worst));
}

}  // namespace msmlab
