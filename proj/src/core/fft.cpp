#include "core/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "core/error.hpp"

namespace msmlab {

namespace {

using PlanKey = std::pair<std::vector<int>, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const std::vector<int>& extents, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    PlanKey key{extents, sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int e : extents) total *= static_cast<std::size_t>(e);
    // FFTW_ESTIMATE leaves the scratch buffer untouched; in-place, unaligned
    // plans can then be executed on any caller-owned array.
    std::vector<cplx> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(static_cast<int>(extents.size()), extents.data(), buf, buf,
                                   sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) fail(ErrorCode::InvalidArgument, "FFTW could not create a plan");
    plans_.emplace(std::move(key), plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft_inplace(std::vector<cplx>& data, const std::vector<int>& extents, FftDirection dir) {
  std::size_t total = 1;
  for (int e : extents) {
    require(e > 0, "FFT extent must be positive");
    total *= static_cast<std::size_t>(e);
  }
  if (data.size() != total) fail(ErrorCode::ShapeMismatch, "FFT buffer size does not match extents");
  const int sign = dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = cache().get(extents, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

namespace {

std::vector<int> extents_of(const Grid2D& g) {
  if (g.is_line()) return {g.nx()};
  return {g.ny(), g.nx()};
}

}  // namespace

Spectrum forward_fft(const ComplexField& f) {
  Spectrum s(f.grid);
  s.coeffs = f.values;
  fft_inplace(s.coeffs, extents_of(f.grid), FftDirection::Forward);
  return s;
}

ComplexField inverse_fft(const Spectrum& s) {
  ComplexField f(s.grid, s.coeffs);
  fft_inplace(f.values, extents_of(s.grid), FftDirection::Backward);
  const double scale = 1.0 / static_cast<double>(s.grid.size());
  for (cplx& v : f.values) v *= scale;
  return f;
}

}  // namespace msmlab
