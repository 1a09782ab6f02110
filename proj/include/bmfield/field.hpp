#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bmfield/linalg.hpp"
#include "bmfield/parallel.hpp"
#include "bmfield/spectral.hpp"

namespace bm {

// Regular grid over [-s, s]^n: points_per_axis sites per axis at spacing
// h = 2s / points_per_axis, site coordinates -s + g*h (left-closed).
struct GridSpec {
    int n = 1;
    double s = 1.0;
    int points_per_axis = 256;

    double spacing() const { return 2.0 * s / points_per_axis; }
    std::int64_t total_sites() const;
    double coordinate(int axis_index) const { return -s + axis_index * spacing(); }
    void validate() const;
    bool operator==(const GridSpec& o) const;
};

struct FieldSample {
    GridSpec grid;
    int m = 1;
    std::vector<double> values;  // site-major, channels interleaved
    std::uint64_t seed = 0;
    std::string model_id;
    double max_imag_residue = 0.0;  // diagnostic from the synthesis

    double value(std::int64_t site, int channel) const {
        return values[std::size_t(site) * m + channel];
    }
};

enum class SynthesisMode {
    SingleNoise,          // one shared complex noise, channels filtered by alpha_j
    CholeskyPerFrequency  // per-frequency matrix root of f(t); same law for f = alpha alpha^T
};

// Spectral synthesis on [-2s, 2s]^n cropped to [-s, s]^n (the padding keeps
// periodization wrap-around out of the window). Deterministic in
// (seed, grid, model) and bit-identical for every worker count.
FieldSample simulate(const SpectralModel& spec, const GridSpec& grid, std::uint64_t seed,
                     SynthesisMode mode = SynthesisMode::SingleNoise,
                     Exec exec = Exec::Parallel);

// O(sites x frequencies) synthesis used to validate the FFT path on tiny grids.
FieldSample simulate_reference_dft(const SpectralModel& spec, const GridSpec& grid,
                                   std::uint64_t seed);

struct CovarianceEstimate {
    std::vector<std::vector<double>> lags;  // requested lags snapped to the grid
    std::vector<Mat> mean;                  // estimate per lag
    std::vector<Mat> stderr_jack;           // jackknife standard error per lag
    int samples = 0;
};

// Cross-channel, cross-lag averages over >= 30 samples on a common grid with
// delete-one-sample jackknife standard errors.
CovarianceEstimate empirical_covariance(std::span<const FieldSample> samples,
                                        const std::vector<std::vector<double>>& lags);

// Flat binary: 16-byte header (magic "BMF1", u32 n, m, N), then little-endian
// doubles in row-major site order with channels interleaved. The JSON sidecar
// carries seed, model id and grid.
void write_field(const FieldSample& sample, const std::filesystem::path& bin_path,
                 const std::filesystem::path& sidecar_path);
FieldSample read_field(const std::filesystem::path& bin_path);

}  // namespace bm
