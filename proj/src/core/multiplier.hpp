#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace msmlab {

/// A [k, Z] multiplier on Z = (Z_N)^d, stored on the hyperplane
/// Gamma_k = {xi_1 + ... + xi_k = 0}. Group elements are integers in
/// [0, N^d) whose base-N digits are the coordinates. The hyperplane is
/// parametrized by (xi_1, ..., xi_{k-1}); values[p] uses the digits of p in
/// base |Z| (xi_1 least significant).
struct MultiplierSpec {
  int k = 2;
  int modulus = 2;
  int dim = 1;
  std::vector<std::complex<double>> values;

  int order() const;
  int add(int a, int b) const;
  int negate(int a) const;
  /// Full k-tuple of the hyperplane point with parameter index p.
  std::vector<int> point(std::size_t p) const;
};

/// Largest hyperplane that may be enumerated.
inline constexpr std::size_t kMaxHyperplanePoints = 1000000;

/// Tabulates m on Gamma_k(Z); raises TooLarge above kMaxHyperplanePoints.
MultiplierSpec make_multiplier(int k, int modulus, int dim,
                               const std::function<std::complex<double>(const std::vector<int>&)>& m);

/// chi_A(xi_1) chi_B(xi_2) as a [3, Z] multiplier. Sets are membership masks.
MultiplierSpec indicator_multiplier(int modulus, int dim, const std::vector<bool>& a,
                                    const std::vector<bool>& b);

/// sum over Gamma_k of m(xi) prod f_j(xi_j), counting measure.
std::complex<double> multilinear_form(const MultiplierSpec& m,
                                      const std::vector<std::vector<std::complex<double>>>& f);

/// min_j sup_eta (sum over Gamma_k with xi_j = eta of |m|^2)^{1/2}
double multiplier_upper_bound(const MultiplierSpec& m);

struct LowerBoundOptions {
  int restarts = 50;
  int max_sweeps = 2000;
  double tol = 1e-14;
  unsigned long seed = 1;
};

/// Best value of |form| over unit inputs found by alternating maximization.
double multiplier_lower_bound(const MultiplierSpec& m, const LowerBoundOptions& opt = {});

struct MultiplierBounds {
  double lower = 0.0;
  double upper = 0.0;
};

MultiplierBounds multiplier_norm_bounds(const MultiplierSpec& m, const LowerBoundOptions& opt = {});

/// Bounds for several specs, evaluated in parallel.
std::vector<MultiplierBounds> multiplier_norm_bounds(const std::vector<MultiplierSpec>& specs,
                                                     const LowerBoundOptions& opt = {});

/// sup_xi |{xi_1 in A : xi - xi_1 in B}|^{1/2}
double counting_bound(int modulus, int dim, const std::vector<bool>& a, const std::vector<bool>& b);

/// sup_xi |{(xi_1, xi_2) in A x B : xi - xi_1 - xi_2 in C}|^{1/2}
double counting_bound(int modulus, int dim, const std::vector<bool>& a, const std::vector<bool>& b,
                      const std::vector<bool>& c);

}  // namespace msmlab
