#include "bmfield/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmfield/errors.hpp"
#include "bmfield/jsonw.hpp"
#include "bmfield/stats.hpp"

namespace bm {

namespace {
void decode_site(std::int64_t site, int n, int pts, std::span<int> digits) {
    for (int axis = n - 1; axis >= 0; --axis) {
        digits[std::size_t(axis)] = int(site % pts);
        site /= pts;
    }
}
}  // namespace

Observation window_functional(const FieldSample& sample, const Functional& g, double g0,
                              Exec exec) {
    if (g.m != sample.m) throw DimensionMismatch("window_functional: channel count mismatch");
    const GridSpec& grid = sample.grid;
    const int n = grid.n;
    const double h = grid.spacing();
    const double cell = std::pow(h, double(n));
    const double norm = std::pow(2.0 * grid.s, -0.5 * double(n));
    const double total = det_sum(
        grid.total_sites(),
        [&](std::int64_t site) {
            thread_local std::vector<double> xi;
            xi.assign(std::size_t(sample.m), 0.0);
            for (int j = 0; j < sample.m; ++j) xi[std::size_t(j)] = sample.value(site, j);
            return g(xi) - g0;
        },
        exec);
    Observation obs;
    obs.seed = sample.seed;
    obs.s = grid.s;
    obs.value = norm * cell * total;
    return obs;
}

PathObservation window_path(const FieldSample& sample, const Functional& g, double g0,
                            std::span<const double> y_grid, Exec exec) {
    if (g.m != sample.m) throw DimensionMismatch("window_path: channel count mismatch");
    const GridSpec& grid = sample.grid;
    const int n = grid.n;
    const double h = grid.spacing();
    const double s = grid.s;
    std::vector<double> y_sorted(y_grid.begin(), y_grid.end());
    if (y_sorted.empty()) throw ConfigError("verify.y_grid: empty");
    if (!std::is_sorted(y_sorted.begin(), y_sorted.end()))
        throw ConfigError("verify.y_grid: must be increasing");
    for (double y : y_sorted) {
        if (y < 0) throw ConfigError("verify.y_grid: y must be nonnegative");
        if (s * std::pow(y, 1.0 / double(n)) > s + 0.5 * h)
            throw ConfigError("verify.y_grid: box for y=" + JsonWriter::number(y) +
                              " exceeds the sampled domain");
    }

    // Smallest y whose box contains a site at max-coordinate radius rho:
    // rho <= s y^{1/n} + h/2  <=>  y >= ((rho - h/2)/s)^n.
    const std::size_t bins = y_sorted.size() + 1;  // last bin: beyond max y
    std::vector<double> annulus(bins, 0.0);
    det_sum_vec(
        grid.total_sites(), bins,
        [&](std::int64_t site, double* slot) {
            thread_local std::vector<int> digits;
            thread_local std::vector<double> xi;
            digits.assign(std::size_t(n), 0);
            xi.assign(std::size_t(sample.m), 0.0);
            decode_site(site, n, grid.points_per_axis, digits);
            double radius = 0.0;
            for (int axis = 0; axis < n; ++axis)
                radius = std::max(radius, std::abs(grid.coordinate(digits[std::size_t(axis)])));
            const double y_needed =
                std::pow(std::max(0.0, radius - 0.5 * h) / s, double(n));
            const auto it = std::lower_bound(y_sorted.begin(), y_sorted.end(),
                                             y_needed - 1e-12);
            const std::size_t bin = std::size_t(it - y_sorted.begin());
            for (int j = 0; j < sample.m; ++j) xi[std::size_t(j)] = sample.value(site, j);
            slot[bin] += g(xi) - g0;
        },
        annulus.data(), exec);

    const double cell = std::pow(h, double(n));
    const double norm = std::pow(2.0 * s, -0.5 * double(n));
    PathObservation path;
    path.seed = sample.seed;
    path.s = s;
    path.y.assign(y_sorted.begin(), y_sorted.end());
    path.z.resize(y_sorted.size());
    double running = 0.0;
    for (std::size_t k = 0; k < y_sorted.size(); ++k) {
        running += annulus[k];
        path.z[k] = y_sorted[k] == 0.0 ? 0.0 : norm * cell * running;
    }
    return path;
}

CltReport clt_test(std::span<const Observation> observations, double target_variance,
                   const CltOptions& options) {
    CltReport report;
    report.options = options;
    report.target_variance = target_variance;
    report.replicates = observations.size();
    if (observations.size() < options.min_replicates)
        throw InsufficientReplicates("clt_test: need at least " +
                                     std::to_string(options.min_replicates) +
                                     " observations, got " + std::to_string(observations.size()));
    std::vector<double> values;
    values.reserve(observations.size());
    for (const auto& o : observations) values.push_back(o.value);
    const double n = double(values.size());
    report.sample_mean = mean(values);
    report.sample_variance = sample_variance(values);
    report.variance_band =
        options.variance_band_factor * target_variance * std::sqrt(2.0 / n);
    report.variance_pass =
        std::abs(report.sample_variance - target_variance) <= report.variance_band;
    report.ks_statistic =
        ks_statistic(values, normal_cdf_param, 0.0, std::sqrt(target_variance));
    report.ks_critical = options.ks_level_critical / std::sqrt(n);
    report.ks_pvalue = ks_pvalue(report.ks_statistic, values.size());
    report.ks_pass = report.ks_statistic < report.ks_critical;
    report.pass = report.variance_pass && report.ks_pass;
    return report;
}

IncrementReport increment_test(std::span<const PathObservation> paths, double p,
                               std::span<const std::pair<double, double>> pairs,
                               const Functional& g, const IncrementOptions& options) {
    if (p <= 2.0)
        throw ConfigError("increment_test: the moment order must exceed 2");
    if (p > g.integrability)
        throw ConfigError("increment_test: functional '" + g.label +
                          "' only declares integrability p <= " +
                          JsonWriter::number(g.integrability));
    if (paths.size() < options.min_replicates)
        throw InsufficientReplicates("increment_test: need at least " +
                                     std::to_string(options.min_replicates) + " paths, got " +
                                     std::to_string(paths.size()));
    const auto& y = paths[0].y;
    for (const auto& path : paths)
        if (path.y.size() != y.size())
            throw DimensionMismatch("increment_test: paths use different y grids");
    auto index_of = [&](double target) {
        for (std::size_t i = 0; i < y.size(); ++i)
            if (std::abs(y[i] - target) < 1e-12) return i;
        throw ConfigError("increment_test: y value " + JsonWriter::number(target) +
                          " is not on the path grid");
    };

    IncrementReport report;
    report.p = p;
    report.options = options;
    std::vector<double> ratios;
    for (const auto& [y1, y2] : pairs) {
        if (y1 == y2) continue;  // zero increment, ratio undefined
        const std::size_t i1 = index_of(y1), i2 = index_of(y2);
        double acc = 0.0;
        for (const auto& path : paths)
            acc += std::pow(std::abs(path.z[i2] - path.z[i1]), p);
        const double moment = acc / double(paths.size());
        const double ratio = moment / std::pow(std::abs(y2 - y1), 0.5 * p);
        report.pairs.push_back({y1, y2, ratio});
        ratios.push_back(ratio);
    }
    if (ratios.empty()) throw ConfigError("increment_test: no nondegenerate pairs");
    report.max_ratio = *std::max_element(ratios.begin(), ratios.end());
    report.median_ratio = median(ratios);
    report.spread = report.median_ratio > 0 ? report.max_ratio / report.median_ratio
                                            : std::numeric_limits<double>::infinity();
    report.pass = report.spread < options.spread_factor;
    return report;
}

std::vector<std::pair<double, double>> dyadic_pairs(int levels) {
    std::vector<std::pair<double, double>> out;
    for (int j = 0; j < levels; ++j) {
        const double step = std::ldexp(1.0, -j);
        for (int k = 0; (k + 1) * step <= 1.0 + 1e-12; ++k)
            out.emplace_back(k * step, (k + 1) * step);
    }
    return out;
}

}  // namespace bm
