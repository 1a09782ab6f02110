#include "bmfield/spectral.hpp"

#include <cmath>
#include <numbers>

#include "bmfield/errors.hpp"

namespace bm {

SpectralModel::SpectralModel(int n, int m, AmplitudeFn base, double t_max, std::string id)
    : n_(n), m_(m), base_(std::move(base)), mix_(Mat::identity(m)), t_max_(t_max),
      id_(std::move(id)) {
    if (n < 1 || n > 3) throw ModelError("spectral model: 1 <= n <= 3");
    if (m < 1 || m > 4) throw ModelError("spectral model: 1 <= m <= 4");
    if (t_max <= 0) throw ModelError("spectral model: positive frequency cutoff required");
}

void SpectralModel::amplitude(std::span<const double> t, std::span<double> out) const {
    if (int(t.size()) != n_ || int(out.size()) != m_)
        throw DimensionMismatch("spectral amplitude argument size");
    thread_local std::vector<double> raw;
    raw.assign(std::size_t(m_), 0.0);
    base_(t, raw);
    mat_vec_mul(mix_, raw, out);
}

Mat SpectralModel::density(std::span<const double> t) const {
    if (density_) return density_(t);
    std::vector<double> a(std::size_t(m_), 0.0);
    amplitude(t, a);
    return mat_vec_outer(a, a);
}

namespace {
// Trapezoid weights over a symmetric uniform grid.
double grid_weight(std::int64_t i, std::int64_t pts, double h) {
    return (i == 0 || i == pts - 1) ? 0.5 * h : h;
}
}  // namespace

void SpectralModel::normalize(int grid_points) {
    if (grid_points < 3) throw ModelError("spectral normalize: need at least 3 grid points");
    const std::int64_t pts = grid_points;
    const double h = 2.0 * t_max_ / double(pts - 1);
    std::int64_t total = 1;
    for (int axis = 0; axis < n_; ++axis) total *= pts;
    Mat gram(m_, m_);
    std::vector<double> t(std::size_t(n_), 0.0), a(std::size_t(m_), 0.0);
    for (std::int64_t node = 0; node < total; ++node) {
        std::int64_t rest = node;
        double w = 1.0;
        for (int axis = n_ - 1; axis >= 0; --axis) {
            const std::int64_t i = rest % pts;
            rest /= pts;
            t[std::size_t(axis)] = -t_max_ + double(i) * h;
            w *= grid_weight(i, pts, h);
        }
        base_(t, a);
        for (int j = 0; j < m_; ++j)
            for (int k = 0; k < m_; ++k) gram(j, k) += w * a[std::size_t(j)] * a[std::size_t(k)];
    }
    if (!gram.all_finite()) throw ModelError("spectral Gram matrix is not finite");
    if (gram.max_abs() == 0.0) {
        // Degenerate zero model: admitted so a vanishing amplitude yields the
        // identically zero field.
        mix_ = Mat::identity(m_);
        normalized_ = true;
        return;
    }
    if (min_eigenvalue(gram) < 1e-10)
        throw ModelError("spectral Gram matrix is singular; channels are linearly dependent");
    mix_ = sym_inv_sqrt(gram);
    normalized_ = true;
}

double SpectralModel::tail_mass(int channel, double cut, int grid_points) const {
    if (n_ != 1)
        throw ModelError("tail_mass implemented for n = 1 spectral diagnostics only");
    const std::int64_t pts = grid_points;
    const double wide = std::max(2.0 * cut, t_max_ * 2.0);
    const double h = 2.0 * wide / double(pts - 1);
    double mass = 0.0;
    std::vector<double> t(1, 0.0), a(std::size_t(m_), 0.0);
    for (std::int64_t i = 0; i < pts; ++i) {
        t[0] = -wide + double(i) * h;
        if (std::abs(t[0]) <= cut) continue;
        amplitude(t, a);
        mass += grid_weight(i, pts, h) * a[std::size_t(channel)] * a[std::size_t(channel)];
    }
    return mass;
}

namespace {

double pget(const std::map<std::string, double>& p, const std::string& k, double dflt) {
    auto it = p.find(k);
    return it == p.end() ? dflt : it->second;
}

}  // namespace

SpectralModel make_spectral(const std::string& kind, const std::map<std::string, double>& params) {
    const double scale = pget(params, "scale", 1.0);
    if (scale <= 0) throw ConfigError("spectral.scale: must be positive");
    const int n = int(pget(params, "n", 1));
    SpectralModel model;
    // Gaussian band mass beyond T decays like erfc(scale*T/sqrt(2)); 8/scale
    // pushes it far below the 1e-8 tail requirement.
    const double gauss_cut = 8.0 / scale;
    if (kind == "gaussian") {
        const double c = std::sqrt(scale / std::sqrt(2.0 * std::numbers::pi));
        model = SpectralModel(
            n, 1,
            [scale, c, n](std::span<const double> t, std::span<double> out) {
                double q = 0.0;
                for (int i = 0; i < n; ++i) q += t[std::size_t(i)] * t[std::size_t(i)];
                out[0] = std::pow(c, double(n)) * std::exp(-scale * scale * q / 4.0);
            },
            gauss_cut, "spectral:gaussian");
    } else if (kind == "gaussian_mod") {
        const double t0 = pget(params, "t0", 3.0);
        model = SpectralModel(
            n, 1,
            [scale, t0, n](std::span<const double> t, std::span<double> out) {
                // Bands at +-t0 along the first axis; Gaussian in the others.
                double q = 0.0;
                for (int i = 1; i < n; ++i) q += t[std::size_t(i)] * t[std::size_t(i)];
                const double s2 = scale * scale / 4.0;
                const double u = t[0];
                out[0] = (std::exp(-s2 * (u - t0) * (u - t0)) +
                          std::exp(-s2 * (u + t0) * (u + t0))) *
                         std::exp(-s2 * q);
            },
            gauss_cut + t0, "spectral:gaussian_mod");
    } else if (kind == "fejer") {
        const double cutoff = pget(params, "cutoff", 3.0);
        if (cutoff <= 0) throw ConfigError("spectral.cutoff: must be positive");
        model = SpectralModel(
            n, 1,
            [cutoff, n](std::span<const double> t, std::span<double> out) {
                double v = 1.0;
                for (int i = 0; i < n; ++i) {
                    const double u = std::abs(t[std::size_t(i)]) / cutoff;
                    v *= u < 1.0 ? std::sqrt(1.0 - u) : 0.0;
                }
                out[0] = v;
            },
            cutoff, "spectral:fejer");
    } else if (kind == "gauss_hermite_pair") {
        model = SpectralModel(
            n, 2,
            [scale, n](std::span<const double> t, std::span<double> out) {
                double q = 0.0;
                for (int i = 0; i < n; ++i) q += t[std::size_t(i)] * t[std::size_t(i)];
                const double band = std::exp(-scale * scale * q / 4.0);
                out[0] = band;
                out[1] = (1.0 - scale * scale * q / double(n)) * band;
            },
            gauss_cut, "spectral:gauss_hermite_pair");
    } else if (kind == "band_pair") {
        const double t0 = pget(params, "t0", 8.0);
        model = SpectralModel(
            n, 2,
            [scale, t0, n](std::span<const double> t, std::span<double> out) {
                double q = 0.0;
                for (int i = 1; i < n; ++i) q += t[std::size_t(i)] * t[std::size_t(i)];
                const double s2 = scale * scale / 4.0;
                const double u = t[0];
                const double cross = std::exp(-s2 * q);
                out[0] = std::exp(-s2 * u * u) * cross;
                out[1] = (std::exp(-s2 * (u - t0) * (u - t0)) +
                          std::exp(-s2 * (u + t0) * (u + t0))) *
                         cross;
            },
            gauss_cut + t0, "spectral:band_pair");
    } else {
        throw ConfigError("spectral.kind: unknown spectral model '" + kind + "'");
    }
    const int default_pts = n == 1 ? 4097 : (n == 2 ? 513 : 129);
    model.normalize(int(pget(params, "normalize_points", default_pts)));
    return model;
}

}  // namespace bm
