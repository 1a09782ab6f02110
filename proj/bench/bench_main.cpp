// Kernel benchmark: times the serial reference path against the OpenMP path
// for the hot loops and checks that both produce identical results.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "bmfield/chaos.hpp"
#include "bmfield/covariance.hpp"
#include "bmfield/fft.hpp"
#include "bmfield/field.hpp"
#include "bmfield/functional.hpp"
#include "bmfield/harness.hpp"
#include "bmfield/parallel.hpp"
#include "bmfield/philox.hpp"
#include "bmfield/spectral.hpp"
#include "bmfield/variance.hpp"

using namespace bm;

namespace {

template <class Fn>
double time_ms(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void report(const char* kernel, double serial_ms, double parallel_ms, double deviation) {
    std::printf("%-28s %10.1f ms %10.1f ms %7.2fx   max|delta| %.3g\n", kernel, serial_ms,
                parallel_ms, serial_ms / parallel_ms, deviation);
}

}  // namespace

int main() {
    std::printf("threads available: %d\n", max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    {  // Chunked deterministic reduction over a synthetic stream.
        const std::int64_t n = 1 << 26;
        auto term = [](std::int64_t i) {
            return std::sin(1e-6 * double(i)) / (1.0 + 1e-9 * double(i));
        };
        double serial_value = 0.0, parallel_value = 0.0;
        const double serial_ms = time_ms([&] { serial_value = det_sum(n, term, Exec::Serial); });
        const double parallel_ms =
            time_ms([&] { parallel_value = det_sum(n, term, Exec::Parallel); });
        report("deterministic reduction", serial_ms, parallel_ms,
               std::abs(serial_value - parallel_value));
    }

    {  // Batch of FFT lines, as used by the synthesis stage.
        const std::size_t rows = 512, cols = 4096;
        std::vector<cplx> serial_data(rows * cols), parallel_data(rows * cols);
        CounterRng rng(1, 0);
        for (std::size_t i = 0; i < serial_data.size(); ++i) {
            const auto [a, b] = rng.normal_pair(i);
            serial_data[i] = {a, b};
        }
        parallel_data = serial_data;
        const std::size_t dims[2] = {rows, cols};
        const double serial_ms =
            time_ms([&] { fft_nd(serial_data.data(), dims, true, Exec::Serial); });
        const double parallel_ms =
            time_ms([&] { fft_nd(parallel_data.data(), dims, true, Exec::Parallel); });
        double dev = 0.0;
        for (std::size_t i = 0; i < serial_data.size(); ++i)
            dev = std::max(dev, std::abs(serial_data[i] - parallel_data[i]));
        report("fft batch 512x4096", serial_ms, parallel_ms, dev);
    }

    const SpectralModel spec = make_spectral("gauss_hermite_pair");
    GridSpec grid;
    grid.n = 1;
    grid.s = 200.0;
    grid.points_per_axis = 8192;

    {  // Full field synthesis.
        FieldSample serial_sample, parallel_sample;
        const double serial_ms = time_ms(
            [&] { serial_sample = simulate(spec, grid, 7, SynthesisMode::SingleNoise, Exec::Serial); });
        const double parallel_ms = time_ms([&] {
            parallel_sample = simulate(spec, grid, 7, SynthesisMode::SingleNoise, Exec::Parallel);
        });
        double dev = 0.0;
        for (std::size_t i = 0; i < serial_sample.values.size(); ++i)
            dev = std::max(dev,
                           std::abs(serial_sample.values[i] - parallel_sample.values[i]));
        report("field synthesis 2x8192", serial_ms, parallel_ms, dev);
    }

    {  // Window functional over a batch of samples.
        const Functional g = make_functional("product", 2);
        std::vector<FieldSample> samples;
        for (int rep = 0; rep < 16; ++rep)
            samples.push_back(simulate(spec, grid, 100 + std::uint64_t(rep)));
        double serial_acc = 0.0, parallel_acc = 0.0;
        const double serial_ms = time_ms([&] {
            for (const auto& s : samples)
                serial_acc += window_functional(s, g, 0.0, Exec::Serial).value;
        });
        const double parallel_ms = time_ms([&] {
            for (const auto& s : samples)
                parallel_acc += window_functional(s, g, 0.0, Exec::Parallel).value;
        });
        report("window functional x16", serial_ms, parallel_ms,
               std::abs(serial_acc - parallel_acc));
    }

    {  // Covariance quadrature (variance pipeline inner loop).
        const auto [model, g] =
            whiten(make_covariance("spectral:gauss_hermite_pair", 1, 2, {{"freq_points", 4096}}),
                   make_functional("product", 2));
        const ChaosExpansion e = chaos_coefficients(g, 2, {.q_max = 4, .quadrature_order = 48});
        BoxQuadratureOptions serial_opts, parallel_opts;
        serial_opts.exec = Exec::Serial;
        serial_opts.start_level = 10;
        serial_opts.max_level = 12;
        parallel_opts.exec = Exec::Parallel;
        parallel_opts.start_level = 10;
        parallel_opts.max_level = 12;
        double serial_value = 0.0, parallel_value = 0.0;
        const double serial_ms = time_ms(
            [&] { serial_value = windowed_variance(e, model, 40.0, serial_opts); });
        const double parallel_ms = time_ms(
            [&] { parallel_value = windowed_variance(e, model, 40.0, parallel_opts); });
        report("covariance quadrature", serial_ms, parallel_ms,
               std::abs(serial_value - parallel_value));
    }
    return 0;
}
