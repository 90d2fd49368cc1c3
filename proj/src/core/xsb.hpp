#pragma once

#include <string>
#include <vector>

#include "core/spacetime.hpp"

namespace msmlab {

/// Which factors of the cubic product are conjugated.
enum class CubicVariant {
  ConjMiddle,  // u1 conj(u2) u3
  ConjPair,    // u1 conj(u2) conj(u3)
  NoConj,      // u1 u2 u3
};

const char* to_string(CubicVariant v);

/// Product of three fields for the chosen variant, two-thirds masked.
SpaceTimeField cubic_form(const SpaceTimeField& u1, const SpaceTimeField& u2,
                          const SpaceTimeField& u3, CubicVariant variant);

/// ||cubic||_{X_{s,-1/2+2eps}} / prod ||u_i||_{X_{s,1/2+eps}}; 0 if any input vanishes.
double cubic_ratio(const SpaceTimeField& u1, const SpaceTimeField& u2, const SpaceTimeField& u3,
                   CubicVariant variant, double s, double eps);

/// grad inv_lap(u1 conj u2) . grad inv_lap(u3 conj u4) u5, two-thirds masked.
SpaceTimeField quintic_form(const SpaceTimeField& u1, const SpaceTimeField& u2,
                            const SpaceTimeField& u3, const SpaceTimeField& u4,
                            const SpaceTimeField& u5);

double quintic_ratio(const SpaceTimeField& u1, const SpaceTimeField& u2, const SpaceTimeField& u3,
                     const SpaceTimeField& u4, const SpaceTimeField& u5, double s, double eps);

/// beta with lap beta = 2 Im(u1 conj u2) on every time slice (mean removed,
/// spatially dealiased).
SpaceTimeField null_form_potential(const SpaceTimeField& u1, const SpaceTimeField& u2);

struct NullFormValue {
  /// integral of (beta_x1 d2 u3 - beta_x2 d1 u3) conj(W)
  cplx direct;
  /// integral of beta (d2 conj(W) d1 u3 - d1 conj(W) d2 u3)
  cplx parts;
  /// |direct - parts| / max(|direct|, |parts|), 0 when both vanish.
  double relative_defect() const;
};

NullFormValue null_form_pairing(const SpaceTimeField& u1, const SpaceTimeField& u2,
                                const SpaceTimeField& u3, const SpaceTimeField& w);

/// |M| / (prod ||u_i||_{X_{s,1/2+eps}} ||W||_{X^-_{-s,1/2-2eps}}).
double null_form_ratio(const SpaceTimeField& u1, const SpaceTimeField& u2,
                       const SpaceTimeField& u3, const SpaceTimeField& w, double s, double eps);

struct BilinearRatios {
  /// ||u v||_{L^{p'}_t L^p_x} / (||u|| ||v||) in X_{0,1/2+eps}
  double product = 0.0;
  /// ||u conj v||_{L^{p'}_t L^p_x} / (||u|| ||v||) in X_{eps,1/2+eps}
  double conj_product = 0.0;
  /// ||u||_{L^{2p'}_t L^{2p}_x} / ||u||_{X_{0,1/2+eps}}
  double embedding = 0.0;
};

/// Requires 1 <= p <= 2; p = 1 uses p' = infinity.
BilinearRatios bilinear_ratios(const SpaceTimeField& u, const SpaceTimeField& v, double p,
                               double eps);

/// sup_t ||u(t)||_{L2_x}
double sup_time_l2(const SpaceTimeField& u);

/// Exact discrete constant C with sup_t ||u(t)||_{L2} <= C ||u||_{X_{s,b}} for
/// every field on this space-time grid (Cauchy-Schwarz in tau).
double sup_time_l2_constant(const Grid2D& g, int nt, double t_window, double s, double b);

enum class EnsembleKind { White, Paraboloid, Separated };

const char* to_string(EnsembleKind k);
EnsembleKind parse_ensemble_kind(const std::string& name);

struct EnsembleSpec {
  int n = 32;
  int nt = 64;
  double length = 6.283185307179586;
  double t_window = 0.5;
  EnsembleKind kind = EnsembleKind::White;
  unsigned long seed = 1;
  int size = 8;
};

/// Largest spatial band radius (in units of the fundamental) drawn by the
/// ensembles; members cycle through the dyadic radii up to it.
int ensemble_band(int n);

/// One random windowed input. `slot` selects the argument position; in the
/// separated ensemble even slots are low frequency and odd slots high.
SpaceTimeField ensemble_member(const EnsembleSpec& spec, unsigned long member_seed, int slot);

struct RatioRecord {
  std::string test_name;
  int n = 0;
  int nt = 0;
  double eps = 0.0;
  double s = 0.0;
  int ensemble_size = 0;
  double max_ratio = 0.0;
  unsigned long argmax_seed = 0;
};

struct RatioSuiteReport {
  std::vector<RatioRecord> records;
  /// Largest relative mismatch between the two null-form assemblies.
  double max_null_form_defect = 0.0;
};

/// Cubic (three variants), quintic, null-form and bilinear/embedding ratios
/// over one ensemble. Member i uses seed spec.seed + i.
RatioSuiteReport run_ratio_suite(const EnsembleSpec& spec, double s, double eps);

/// CSV with columns test_name,grid,nt,eps,s,ensemble_size,max_ratio,argmax_seed.
std::string ratio_csv(const std::vector<RatioRecord>& records);

}  // namespace msmlab
