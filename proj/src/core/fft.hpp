#pragma once

#include <complex>
#include <vector>

#include "core/field.hpp"

namespace msmlab {

enum class FftDirection { Forward, Backward };

/// In-place multidimensional complex transform over a row-major array with
/// the given extents (slowest first). Unnormalized in both directions.
/// Plans are created once per (extents, direction) and shared between threads.
void fft_inplace(std::vector<cplx>& data, const std::vector<int>& extents, FftDirection dir);

Spectrum forward_fft(const ComplexField& f);
/// Normalized inverse: inverse_fft(forward_fft(f)) == f.
ComplexField inverse_fft(const Spectrum& s);

}  // namespace msmlab
