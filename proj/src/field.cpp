#include "bmfield/field.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "bmfield/errors.hpp"
#include "bmfield/fft.hpp"
#include "bmfield/jsonw.hpp"
#include "bmfield/philox.hpp"
#include "bmfield/stats.hpp"

namespace bm {

std::int64_t GridSpec::total_sites() const {
    std::int64_t total = 1;
    for (int axis = 0; axis < n; ++axis) total *= points_per_axis;
    return total;
}

void GridSpec::validate() const {
    if (n < 1 || n > 3) throw ConfigError("grid.n: 1 <= n <= 3");
    if (s <= 0) throw ConfigError("grid.s: must be positive");
    const int pp = points_per_axis;
    if (pp < 8 || (pp & (pp - 1)) != 0)
        throw ConfigError("grid.points_per_axis: must be a power of two >= 8");
    if (total_sites() > (std::int64_t(1) << 24))
        throw ConfigError("grid.points_per_axis: total sites exceed the 2^24 budget");
}

bool GridSpec::operator==(const GridSpec& o) const {
    return n == o.n && s == o.s && points_per_axis == o.points_per_axis;
}

namespace {

struct SynthesisLattice {
    int n = 1;
    std::int64_t per_axis = 0;  // M = 2N
    double dt = 0.0;            // frequency spacing
    std::int64_t total = 0;

    void decode(std::int64_t linear, std::span<std::int64_t> kappa) const {
        for (int axis = n - 1; axis >= 0; --axis) {
            kappa[std::size_t(axis)] = linear % per_axis;
            linear /= per_axis;
        }
    }
    std::int64_t mirror_linear(std::span<const std::int64_t> kappa) const {
        std::int64_t lin = 0;
        for (int axis = 0; axis < n; ++axis) {
            const std::int64_t mirrored =
                kappa[std::size_t(axis)] == 0 ? 0 : per_axis - kappa[std::size_t(axis)];
            lin = lin * per_axis + mirrored;
        }
        return lin;
    }
    void frequency(std::span<const std::int64_t> kappa, std::span<double> t) const {
        for (int axis = 0; axis < n; ++axis) {
            const std::int64_t k = kappa[std::size_t(axis)];
            const std::int64_t signed_k = k < per_axis / 2 ? k : k - per_axis;
            t[std::size_t(axis)] = double(signed_k) * dt;
        }
    }
    int phase_parity(std::span<const std::int64_t> kappa) const {
        std::int64_t parity = 0;
        for (int axis = 0; axis < n; ++axis) parity += kappa[std::size_t(axis)];
        return parity % 2 == 0 ? 1 : -1;
    }
    bool self_conjugate(std::span<const std::int64_t> kappa) const {
        for (int axis = 0; axis < n; ++axis) {
            const std::int64_t k = kappa[std::size_t(axis)];
            if (k != 0 && k != per_axis / 2) return false;
        }
        return true;
    }
};

// Hermitian-symmetrized complex standard normal for one lattice bin. Primary
// bins (linear index not above their mirror's) draw, mirror bins conjugate the
// primary draw; self-conjugate bins get a real unit normal.
cplx bin_noise(const CounterRng& rng, const SynthesisLattice& lat, std::int64_t linear,
               std::span<const std::int64_t> kappa, std::uint32_t salt) {
    const std::int64_t mirror = lat.mirror_linear(kappa);
    if (lat.self_conjugate(kappa)) {
        return {rng.normal_pair(std::uint64_t(linear), salt).first, 0.0};
    }
    constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    if (linear <= mirror) {
        const auto [g1, g2] = rng.normal_pair(std::uint64_t(linear), salt);
        return {g1 * inv_sqrt2, g2 * inv_sqrt2};
    }
    const auto [g1, g2] = rng.normal_pair(std::uint64_t(mirror), salt);
    return {g1 * inv_sqrt2, -g2 * inv_sqrt2};
}

void fill_coefficients(const SpectralModel& spec, const SynthesisLattice& lat,
                       std::uint64_t seed, SynthesisMode mode,
                       std::vector<std::vector<cplx>>& channels, Exec exec) {
    const int n = lat.n, m = spec.m();
    const double amp_scale = std::pow(lat.dt, 0.5 * n);
    const CounterRng rng(seed, /*stream=*/0);
    std::atomic<bool> not_psd{false};
    parallel_for(
        lat.total,
        [&](std::int64_t linear) {
            if (not_psd.load(std::memory_order_relaxed)) return;
            thread_local std::vector<std::int64_t> kappa;
            thread_local std::vector<double> t, alpha;
            kappa.assign(std::size_t(n), 0);
            t.assign(std::size_t(n), 0.0);
            alpha.assign(std::size_t(m), 0.0);
            lat.decode(linear, kappa);
            lat.frequency(kappa, t);
            const double parity = lat.phase_parity(kappa);
            if (mode == SynthesisMode::SingleNoise) {
                const cplx z = bin_noise(rng, lat, linear, kappa, 0);
                spec.amplitude(t, alpha);
                for (int j = 0; j < m; ++j)
                    channels[std::size_t(j)][std::size_t(linear)] =
                        parity * amp_scale * alpha[std::size_t(j)] * z;
            } else {
                // Matrix square root of the density; valid for any real
                // symmetric PSD f, not just the rank-one single-noise one.
                const Mat f = spec.density(t);
                if (min_eigenvalue(f) < -1e-10) {
                    not_psd.store(true);
                    return;
                }
                const Mat root = sym_sqrt(f);
                thread_local std::vector<cplx> z;
                z.assign(std::size_t(m), cplx(0.0, 0.0));
                for (int c = 0; c < m; ++c)
                    z[std::size_t(c)] = bin_noise(rng, lat, linear, kappa, std::uint32_t(c));
                for (int j = 0; j < m; ++j) {
                    cplx acc(0.0, 0.0);
                    for (int c = 0; c < m; ++c) acc += root(j, c) * z[std::size_t(c)];
                    channels[std::size_t(j)][std::size_t(linear)] = parity * amp_scale * acc;
                }
            }
        },
        exec);
    if (not_psd.load())
        throw ModelError("cross-spectral density has a negative eigenvalue at a grid frequency");
}

}  // namespace

FieldSample simulate(const SpectralModel& spec, const GridSpec& grid, std::uint64_t seed,
                     SynthesisMode mode, Exec exec) {
    grid.validate();
    if (spec.n() != grid.n) throw DimensionMismatch("simulate: model and grid dimension differ");
    if (!spec.normalized()) throw ModelError("simulate: spectral model is not normalized");
    const int n = grid.n, m = spec.m();
    const int big = 2 * grid.points_per_axis;  // synthesis grid, cropped later
    const double h = grid.spacing();

    SynthesisLattice lat;
    lat.n = n;
    lat.per_axis = big;
    lat.dt = 2.0 * std::numbers::pi / (double(big) * h);
    lat.total = 1;
    for (int axis = 0; axis < n; ++axis) lat.total *= big;

    const double nyquist = std::numbers::pi / h;
    if (nyquist < spec.t_max())
        throw ModelError("simulate: FFT size mismatch; the frequency grid reaches " +
                         JsonWriter::number(nyquist) + " but the model needs " +
                         JsonWriter::number(spec.t_max()) +
                         " (increase points_per_axis)");

    std::vector<std::vector<cplx>> channels(std::size_t(m),
                                            std::vector<cplx>(std::size_t(lat.total)));
    fill_coefficients(spec, lat, seed, mode, channels, exec);

    const std::size_t big_sz = std::size_t(big);
    const std::vector<std::size_t> dims(std::size_t(n), big_sz);
    for (auto& ch : channels) fft_nd(ch.data(), dims, /*inverse=*/true, exec);

    FieldSample sample;
    sample.grid = grid;
    sample.m = m;
    sample.seed = seed;
    sample.model_id = spec.id();
    sample.values.assign(std::size_t(grid.total_sites()) * m, 0.0);

    double max_imag = 0.0;
    for (const auto& ch : channels)
        for (const cplx& v : ch) max_imag = std::max(max_imag, std::abs(v.imag()));
    sample.max_imag_residue = max_imag;

    const int nn = grid.points_per_axis;
    parallel_for(
        grid.total_sites(),
        [&](std::int64_t site) {
            // Crop window: synthesis index = site index + N/2 per axis.
            std::int64_t rest = site;
            std::int64_t big_linear = 0;
            for (int axis = 0; axis < n; ++axis) {
                std::int64_t digit = 0;
                std::int64_t div = 1;
                for (int a = axis + 1; a < n; ++a) div *= nn;
                digit = (rest / div) % nn;
                big_linear = big_linear * big + (digit + nn / 2);
            }
            for (int j = 0; j < m; ++j)
                sample.values[std::size_t(site) * m + j] =
                    channels[std::size_t(j)][std::size_t(big_linear)].real();
        },
        exec);
    return sample;
}

FieldSample simulate_reference_dft(const SpectralModel& spec, const GridSpec& grid,
                                   std::uint64_t seed) {
    grid.validate();
    const int n = grid.n, m = spec.m();
    const int big = 2 * grid.points_per_axis;
    const double h = grid.spacing();
    SynthesisLattice lat;
    lat.n = n;
    lat.per_axis = big;
    lat.dt = 2.0 * std::numbers::pi / (double(big) * h);
    lat.total = 1;
    for (int axis = 0; axis < n; ++axis) lat.total *= big;
    if (lat.total > (1 << 14))
        throw BudgetExceeded("simulate_reference_dft is for tiny grids only");

    std::vector<std::vector<cplx>> channels(std::size_t(m),
                                            std::vector<cplx>(std::size_t(lat.total)));
    fill_coefficients(spec, lat, seed, SynthesisMode::SingleNoise, channels, Exec::Serial);

    FieldSample sample;
    sample.grid = grid;
    sample.m = m;
    sample.seed = seed;
    sample.model_id = spec.id() + "~dft";
    sample.values.assign(std::size_t(grid.total_sites()) * m, 0.0);

    std::vector<std::int64_t> kappa(std::size_t(n), 0);
    std::vector<double> t(std::size_t(n), 0.0), x(std::size_t(n), 0.0);
    for (std::int64_t site = 0; site < grid.total_sites(); ++site) {
        std::int64_t rest = site;
        for (int axis = n - 1; axis >= 0; --axis) {
            x[std::size_t(axis)] = grid.coordinate(int(rest % grid.points_per_axis));
            rest /= grid.points_per_axis;
        }
        for (int j = 0; j < m; ++j) {
            cplx acc(0.0, 0.0);
            for (std::int64_t linear = 0; linear < lat.total; ++linear) {
                lat.decode(linear, kappa);
                lat.frequency(kappa, t);
                double dot = 0.0;
                for (int axis = 0; axis < n; ++axis) dot += t[std::size_t(axis)] * x[std::size_t(axis)];
                // The synthesis arrays already carry the half-domain phase; undo
                // it here because we evaluate the true exponential instead.
                const double parity = lat.phase_parity(kappa);
                acc += parity * channels[std::size_t(j)][std::size_t(linear)] *
                       cplx(std::cos(dot), std::sin(dot));
            }
            sample.values[std::size_t(site) * m + j] = acc.real();
        }
    }
    return sample;
}

CovarianceEstimate empirical_covariance(std::span<const FieldSample> samples,
                                        const std::vector<std::vector<double>>& lags) {
    if (samples.size() < 30)
        throw InsufficientReplicates("empirical_covariance: need at least 30 samples, got " +
                                     std::to_string(samples.size()));
    const GridSpec grid = samples[0].grid;
    const int m = samples[0].m;
    for (const auto& s : samples)
        if (!(s.grid == grid) || s.m != m)
            throw DimensionMismatch("empirical_covariance: heterogeneous grids");
    const int n = grid.n;
    const int nn = grid.points_per_axis;
    const double h = grid.spacing();

    CovarianceEstimate est;
    est.samples = int(samples.size());
    for (const auto& lag : lags) {
        if (int(lag.size()) != n)
            throw DimensionMismatch("empirical_covariance: lag dimension mismatch");
        std::vector<std::int64_t> offset(std::size_t(n), 0);
        std::vector<double> snapped(std::size_t(n), 0.0);
        std::int64_t valid = 1;
        for (int axis = 0; axis < n; ++axis) {
            offset[std::size_t(axis)] = std::llround(lag[std::size_t(axis)] / h);
            if (std::llabs(offset[std::size_t(axis)]) >= nn)
                throw ConfigError("empirical_covariance: lag exceeds grid extent");
            snapped[std::size_t(axis)] = double(offset[std::size_t(axis)]) * h;
            valid *= nn - std::llabs(offset[std::size_t(axis)]);
        }
        est.lags.push_back(snapped);

        // Per-sample estimates for each channel pair.
        std::vector<std::vector<double>> per_sample(
            std::size_t(m) * m, std::vector<double>(samples.size(), 0.0));
        for (std::size_t si = 0; si < samples.size(); ++si) {
            const FieldSample& s = samples[si];
            std::vector<double> acc(std::size_t(m) * m, 0.0);
            det_sum_vec(
                grid.total_sites(), std::size_t(m) * m,
                [&](std::int64_t site, double* slot) {
                    // site -> shifted site; skip when the shift leaves the grid.
                    std::int64_t rest = site;
                    std::int64_t shifted = 0;
                    for (int axis = 0; axis < n; ++axis) {
                        std::int64_t div = 1;
                        for (int a = axis + 1; a < n; ++a) div *= nn;
                        const std::int64_t digit = (rest / div) % nn;
                        const std::int64_t moved = digit + offset[std::size_t(axis)];
                        if (moved < 0 || moved >= nn) return;
                        shifted = shifted * nn + moved;
                    }
                    for (int j = 0; j < m; ++j)
                        for (int k = 0; k < m; ++k)
                            slot[std::size_t(j) * m + k] +=
                                s.value(shifted, j) * s.value(site, k);
                },
                acc.data(), Exec::Parallel);
            for (int p = 0; p < m * m; ++p)
                per_sample[std::size_t(p)][si] = acc[std::size_t(p)] / double(valid);
        }
        Mat mean_mat(m, m), se_mat(m, m);
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const auto& v = per_sample[std::size_t(j) * m + k];
                mean_mat(j, k) = mean(v);
                se_mat(j, k) = jackknife_stderr(v);
            }
        est.mean.push_back(mean_mat);
        est.stderr_jack.push_back(se_mat);
    }
    return est;
}

namespace {
constexpr char kMagic[4] = {'B', 'M', 'F', '1'};
}

void write_field(const FieldSample& sample, const std::filesystem::path& bin_path,
                 const std::filesystem::path& sidecar_path) {
    static_assert(std::endian::native == std::endian::little,
                  "field binaries are little-endian");
    std::ofstream out(bin_path, std::ios::binary);
    if (!out) throw Error("cannot open " + bin_path.string() + " for writing");
    const std::uint32_t n = std::uint32_t(sample.grid.n);
    const std::uint32_t m = std::uint32_t(sample.m);
    const std::uint32_t pts = std::uint32_t(sample.grid.points_per_axis);
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&m), 4);
    out.write(reinterpret_cast<const char*>(&pts), 4);
    out.write(reinterpret_cast<const char*>(sample.values.data()),
              std::streamsize(sample.values.size() * sizeof(double)));
    if (!out) throw Error("short write to " + bin_path.string());

    JsonWriter w;
    w.begin_object();
    w.kv("seed", sample.seed);
    w.kv("model_id", sample.model_id);
    w.begin_object("grid");
    w.kv("n", sample.grid.n);
    w.kv("s", sample.grid.s);
    w.kv("points_per_axis", sample.grid.points_per_axis);
    w.end_object();
    w.end_object();
    std::ofstream side(sidecar_path);
    side << w.str() << "\n";
}

FieldSample read_field(const std::filesystem::path& bin_path) {
    std::ifstream in(bin_path, std::ios::binary);
    if (!in) throw Error("cannot open " + bin_path.string());
    char magic[4];
    std::uint32_t n = 0, m = 0, pts = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&m), 4);
    in.read(reinterpret_cast<char*>(&pts), 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw Error("bad field binary header in " + bin_path.string());

    FieldSample sample;
    sample.grid.n = int(n);
    sample.grid.points_per_axis = int(pts);
    sample.m = int(m);

    const std::filesystem::path sidecar = bin_path.string() + ".json";
    if (std::filesystem::exists(sidecar)) {
        std::ifstream side(sidecar);
        nlohmann::json j;
        side >> j;
        sample.seed = j.value("seed", std::uint64_t(0));
        sample.model_id = j.value("model_id", std::string());
        if (j.contains("grid")) sample.grid.s = j["grid"].value("s", 1.0);
    }
    std::int64_t total = 1;
    for (std::uint32_t axis = 0; axis < n; ++axis) total *= pts;
    sample.values.resize(std::size_t(total) * m);
    in.read(reinterpret_cast<char*>(sample.values.data()),
            std::streamsize(sample.values.size() * sizeof(double)));
    if (!in) throw Error("field binary truncated: " + bin_path.string());
    return sample;
}

}  // namespace bm
