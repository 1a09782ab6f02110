#include "bmfield/fft.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bmfield/errors.hpp"

namespace bm {

namespace {
bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}

void fft_inplace(cplx* data, std::size_t n, bool inverse) {
    if (!is_pow2(n)) throw DimensionMismatch("fft length must be a power of two");
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * std::numbers::pi / double(len);
        const cplx wstep(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = data[i + k];
                const cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wstep;
            }
        }
    }
}

void dft_reference(std::span<const cplx> in, std::span<cplx> out, bool inverse) {
    const std::size_t n = in.size();
    if (out.size() != n) throw DimensionMismatch("dft_reference output size mismatch");
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t g = 0; g < n; ++g) {
            const double angle = sign * 2.0 * std::numbers::pi * double(k) * double(g) / double(n);
            acc += in[g] * cplx(std::cos(angle), std::sin(angle));
        }
        out[k] = acc;
    }
}

void fft_nd(cplx* data, std::span<const std::size_t> dims, bool inverse, Exec exec) {
    const int ndim = int(dims.size());
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    if (total == 0) return;
    for (int axis = 0; axis < ndim; ++axis) {
        const std::size_t len = dims[axis];
        std::size_t stride = 1;
        for (int a = axis + 1; a < ndim; ++a) stride *= dims[a];
        const std::size_t nlines = total / len;
        parallel_for(
            std::int64_t(nlines),
            [&](std::int64_t line) {
                // Decompose the line index into the base offset of its first element.
                const std::size_t inner = std::size_t(line) % stride;
                const std::size_t outer = std::size_t(line) / stride;
                const std::size_t base = outer * stride * len + inner;
                if (stride == 1) {
                    fft_inplace(data + base, len, inverse);
                } else {
                    std::vector<cplx> scratch(len);
                    for (std::size_t k = 0; k < len; ++k) scratch[k] = data[base + k * stride];
                    fft_inplace(scratch.data(), len, inverse);
                    for (std::size_t k = 0; k < len; ++k) data[base + k * stride] = scratch[k];
                }
            },
            exec);
    }
}

}  // namespace bm
