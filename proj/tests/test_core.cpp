#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bmfield/fft.hpp"
#include "bmfield/linalg.hpp"
#include "bmfield/parallel.hpp"
#include "bmfield/philox.hpp"

using namespace bm;

TEST_SUITE_BEGIN("core");

TEST_CASE("deterministic sum matches naive reference and is thread-count independent") {
    const std::int64_t n = 1 << 18;
    std::vector<double> values(std::size_t(n), 0.0);
    CounterRng rng(7, 1);
    for (std::int64_t i = 0; i < n; ++i) values[std::size_t(i)] = rng.normal(std::uint64_t(i));
    auto term = [&](std::int64_t i) { return values[std::size_t(i)]; };

    const double reference = naive_sum_ref(values);
    const double serial = det_sum(n, term, Exec::Serial);
    CHECK(serial == doctest::Approx(reference).epsilon(1e-12));

    const int original = max_threads();
    for (int threads : {1, 2, 4}) {
        set_threads(threads);
        const double parallel = det_sum(n, term, Exec::Parallel);
        CHECK(parallel == serial);  // bit-identical by construction
    }
    set_threads(original);
}

TEST_CASE("deterministic vector accumulation is exec-mode invariant") {
    const std::int64_t n = 40000;
    const std::size_t dim = 7;
    auto emit = [&](std::int64_t i, double* acc) {
        for (std::size_t d = 0; d < dim; ++d)
            acc[d] += std::sin(0.001 * double(i) * double(d + 1));
    };
    std::vector<double> a(dim), b(dim);
    det_sum_vec(n, dim, emit, a.data(), Exec::Serial);
    det_sum_vec(n, dim, emit, b.data(), Exec::Parallel);
    for (std::size_t d = 0; d < dim; ++d) CHECK(a[d] == b[d]);
}

TEST_CASE("philox known-answer vectors") {
    // Reference vectors for the 10-round 4x32 configuration.
    auto r0 = Philox4x32::block({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(r0[0] == 0x6627e8d5u);
    CHECK(r0[1] == 0xe169c58du);
    CHECK(r0[2] == 0xbc57ac4cu);
    CHECK(r0[3] == 0x9b00dbd8u);

    auto r1 = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                {0xffffffffu, 0xffffffffu});
    CHECK(r1[0] == 0x408f276du);
    CHECK(r1[1] == 0x41c83b0eu);
    CHECK(r1[2] == 0xa20bc7c6u);
    CHECK(r1[3] == 0x6d5451fdu);

    auto r2 = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                {0xa4093822u, 0x299f31d0u});
    CHECK(r2[0] == 0xd16cfe09u);
    CHECK(r2[1] == 0x94fdccebu);
    CHECK(r2[2] == 0x5001e420u);
    CHECK(r2[3] == 0x24126ea1u);
}

TEST_CASE("counter rng normals are standard and order-free") {
    CounterRng rng(123456789, 2);
    const std::size_t n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = rng.normal(i);
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / double(n);
    const double var = sumsq / double(n) - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(var - 1.0) < 6.0 / std::sqrt(double(n)));
    // Addressable draws: same index, same value.
    CHECK(rng.normal(42) == rng.normal(42));
}

TEST_CASE("fft agrees with the reference transform") {
    const std::size_t n = 64;
    std::vector<cplx> data(n), expected(n);
    CounterRng rng(99, 3);
    for (std::size_t i = 0; i < n; ++i) {
        auto [a, b] = rng.normal_pair(i);
        data[i] = {a, b};
    }
    dft_reference(data, expected, false);
    std::vector<cplx> fast = data;
    fft_inplace(fast.data(), n, false);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(fast[i].real() == doctest::Approx(expected[i].real()).epsilon(1e-11));
        CHECK(fast[i].imag() == doctest::Approx(expected[i].imag()).epsilon(1e-11));
    }

    // Round trip: inverse(forward(x)) = n * x.
    fft_inplace(fast.data(), n, true);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(fast[i].real() / double(n) == doctest::Approx(data[i].real()).epsilon(1e-12));
}

TEST_CASE("2-d fft matches per-axis reference") {
    const std::size_t rows = 8, cols = 16;
    std::vector<cplx> data(rows * cols);
    CounterRng rng(5, 4);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = {rng.normal(i), 0.0};
    std::vector<cplx> fast = data;
    const std::size_t dims[2] = {rows, cols};
    fft_nd(fast.data(), dims, false, Exec::Parallel);

    // Reference: transform rows then columns with the O(n^2) kernel.
    std::vector<cplx> ref = data;
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<cplx> line(ref.begin() + std::ptrdiff_t(r * cols),
                               ref.begin() + std::ptrdiff_t((r + 1) * cols));
        std::vector<cplx> out(cols);
        dft_reference(line, out, false);
        for (std::size_t c = 0; c < cols; ++c) ref[r * cols + c] = out[c];
    }
    for (std::size_t c = 0; c < cols; ++c) {
        std::vector<cplx> line(rows), out(rows);
        for (std::size_t r = 0; r < rows; ++r) line[r] = ref[r * cols + c];
        dft_reference(line, out, false);
        for (std::size_t r = 0; r < rows; ++r) ref[r * cols + c] = out[r];
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(fast[i].real() == doctest::Approx(ref[i].real()).epsilon(1e-10));
        CHECK(fast[i].imag() == doctest::Approx(ref[i].imag()).epsilon(1e-10));
    }
}

TEST_CASE("jacobi eigendecomposition and matrix roots") {
    Mat a(3, 3);
    a(0, 0) = 4;  a(0, 1) = 1;   a(0, 2) = 0.5;
    a(1, 0) = 1;  a(1, 1) = 3;   a(1, 2) = -0.2;
    a(2, 0) = 0.5; a(2, 1) = -0.2; a(2, 2) = 2;
    const EigenSym e = eigh(a);
    // Reconstruct A from the decomposition.
    Mat rec(3, 3);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                rec(i, j) += e.values[std::size_t(k)] * e.vectors(i, k) * e.vectors(j, k);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(rec(i, j) == doctest::Approx(a(i, j)).epsilon(1e-12));

    const Mat root = sym_sqrt(a);
    const Mat sq = root * root;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(sq(i, j) == doctest::Approx(a(i, j)).epsilon(1e-12));

    const Mat inv_root = sym_inv_sqrt(a);
    const Mat ident = inv_root * a * inv_root;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(ident(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("cholesky of a PSD matrix") {
    Mat a(2, 2);
    a(0, 0) = 1.0; a(0, 1) = 0.6;
    a(1, 0) = 0.6; a(1, 1) = 1.0;
    const Mat l = cholesky_psd(a);
    const Mat back = l * l.transposed();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(back(i, j) == doctest::Approx(a(i, j)).epsilon(1e-14));
}

TEST_SUITE_END();
