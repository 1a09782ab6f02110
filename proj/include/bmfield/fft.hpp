#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>

#include "bmfield/parallel.hpp"

namespace bm {

using cplx = std::complex<double>;

// In-place radix-2 transform, unnormalized: X_k = sum_g x_g e^{-2pi i kg/N}
// (forward) or with e^{+2pi i kg/N} (inverse). N must be a power of two.
void fft_inplace(cplx* data, std::size_t n, bool inverse);

// Unnormalized O(n^2) reference transform, kept for testing the FFT.
void dft_reference(std::span<const cplx> in, std::span<cplx> out, bool inverse);

// Multi-dimensional transform over a row-major array with extents
// dims[0..ndim). Lines along each axis are transformed independently; the
// line loop parallelizes with disjoint writes, so output is identical for any
// worker count.
void fft_nd(cplx* data, std::span<const std::size_t> dims, bool inverse,
            Exec exec = Exec::Parallel);

}  // namespace bm
