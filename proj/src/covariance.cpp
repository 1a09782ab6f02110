#include "bmfield/covariance.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bmfield/errors.hpp"
#include "bmfield/jsonw.hpp"

namespace bm {

Mat eval_r(const CovarianceModel& model, std::span<const double> x) {
    if (int(x.size()) != model.n)
        throw DimensionMismatch("eval_r: lag dimension does not match model n");
    Mat r(model.m, model.m);
    model.eval(x, r);
    if (!r.all_finite())
        throw ModelError("covariance model '" + model.id + "' returned non-finite entries");
    return r;
}

std::pair<CovarianceModel, Functional> whiten(const CovarianceModel& model,
                                              const Functional& g) {
    if (g.m != model.m) throw DimensionMismatch("whiten: functional dimension mismatch");
    const std::vector<double> origin(std::size_t(model.n), 0.0);
    const Mat sigma = eval_r(model, origin);
    // Already-whitened models pass through untouched.
    bool is_identity = true;
    for (int i = 0; i < model.m && is_identity; ++i)
        for (int j = 0; j < model.m; ++j)
            if (std::abs(sigma(i, j) - (i == j ? 1.0 : 0.0)) > 1e-12) {
                is_identity = false;
                break;
            }
    if (is_identity) {
        CovarianceModel out = model;
        out.whitened = true;
        return {out, g};
    }
    for (int i = 0; i < model.m; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(sigma(i, j) - sigma(j, i)) > 1e-10)
                throw ModelError("whiten: r(0) is not symmetric");
    const double lambda_min = min_eigenvalue(sigma);
    if (lambda_min <= 0.0 || sym_cond(sigma) > 1e8)
        throw ModelError("whiten: r(0) is singular or ill-conditioned (cond > 1e8)");
    const Mat root = sym_sqrt(sigma);
    const Mat inv_root = sym_inv_sqrt(sigma);
    CovarianceModel out = model;
    out.id = model.id + "~whitened";
    out.whitened = true;
    const auto inner = model.eval;
    const Mat w = inv_root;
    out.eval = [inner, w](std::span<const double> x, Mat& r) {
        Mat raw(w.rows(), w.cols());
        inner(x, raw);
        r = w * raw * w;
    };
    return {out, compose_linear(g, root)};
}

double max_abs_row_col_sum(const CovarianceModel& model, std::span<const double> x) {
    const Mat r = eval_r(model, x);
    double best = 0.0;
    for (int i = 0; i < model.m; ++i) {
        double row = 0.0, col = 0.0;
        for (int j = 0; j < model.m; ++j) {
            row += std::abs(r(i, j));
            col += std::abs(r(j, i));
        }
        best = std::max(best, std::max(row, col));
    }
    return best;
}

C1Report check_c1(const CovarianceModel& model, int d, double box_radius, int grid_resolution,
                  Exec exec) {
    if (model.n > 3)
        throw QuadratureError("check_c1: quadrature supports n <= 3");
    if (!model.whitened) throw ModelError("check_c1: model must be whitened first");
    if (d < 1) throw ConfigError("check_c1: covariance power d must be >= 1");
    if (grid_resolution < 3) throw ConfigError("check_c1: grid_resolution must be >= 3");
    const int n = model.n, m = model.m;
    const std::int64_t pts = grid_resolution;
    const double h = 2.0 * box_radius / double(pts - 1);
    std::int64_t total = 1;
    for (int axis = 0; axis < n; ++axis) total *= pts;

    const std::size_t dim = std::size_t(m) * m + 1;
    std::vector<double> acc(dim, 0.0);
    det_sum_vec(
        total, dim,
        [&](std::int64_t node, double* slot) {
            thread_local std::vector<double> x;
            x.assign(std::size_t(n), 0.0);
            std::int64_t rest = node;
            double w = 1.0;
            for (int axis = n - 1; axis >= 0; --axis) {
                const std::int64_t i = rest % pts;
                rest /= pts;
                x[std::size_t(axis)] = -box_radius + double(i) * h;
                w *= (i == 0 || i == pts - 1) ? 0.5 * h : h;
            }
            const Mat r = eval_r(model, x);
            double majorant = 0.0;
            for (int i = 0; i < m; ++i) {
                double row = 0.0, col = 0.0;
                for (int j = 0; j < m; ++j) {
                    row += std::abs(r(i, j));
                    col += std::abs(r(j, i));
                    slot[std::size_t(i) * m + j] += w * std::pow(std::abs(r(i, j)), double(d));
                }
                majorant = std::max(majorant, std::max(row, col));
            }
            slot[std::size_t(m) * m] += w * std::pow(majorant, double(d));
        },
        acc.data(), exec);

    C1Report report;
    report.d = d;
    report.box_radius = box_radius;
    report.resolution = grid_resolution;
    report.pair_integrals = Mat(m, m);
    bool finite = true;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            report.pair_integrals(i, j) = acc[std::size_t(i) * m + j];
            finite = finite && std::isfinite(acc[std::size_t(i) * m + j]);
        }
    report.majorant_integral = acc[std::size_t(m) * m];

    // Boundary sweep: coarse grid on each face of the box.
    const int face_res = std::min<int>(grid_resolution, n == 3 ? 65 : 257);
    double boundary_max = 0.0, boundary_majorant = 0.0;
    std::vector<double> x(std::size_t(n), 0.0);
    std::int64_t face_total = 1;
    for (int axis = 0; axis + 1 < n; ++axis) face_total *= face_res;
    for (int fixed = 0; fixed < n; ++fixed) {
        for (int side = 0; side < 2; ++side) {
            for (std::int64_t node = 0; node < face_total; ++node) {
                std::int64_t rest = node;
                int free_axis = 0;
                for (int axis = 0; axis < n; ++axis) {
                    if (axis == fixed) {
                        x[std::size_t(axis)] = side == 0 ? -box_radius : box_radius;
                    } else {
                        const std::int64_t i = rest % face_res;
                        rest /= face_res;
                        x[std::size_t(axis)] =
                            -box_radius + 2.0 * box_radius * double(i) / double(face_res - 1);
                        ++free_axis;
                    }
                }
                (void)free_axis;
                const Mat r = eval_r(model, x);
                boundary_max = std::max(boundary_max, r.max_abs());
                boundary_majorant = std::max(boundary_majorant, max_abs_row_col_sum(model, x));
            }
        }
    }
    report.boundary_max = boundary_max;
    report.tail_estimate =
        std::pow(boundary_majorant, double(d)) * std::pow(2.0 * box_radius, double(n));
    report.pass = finite && boundary_max < 1e-6;
    return report;
}

std::string c1_report_to_json(const C1Report& report) {
    JsonWriter w;
    w.begin_object();
    w.kv("d", report.d);
    w.kv("box_radius", report.box_radius);
    w.kv("resolution", report.resolution);
    w.begin_array("pair_integrals");
    for (int i = 0; i < report.pair_integrals.rows(); ++i)
        for (int j = 0; j < report.pair_integrals.cols(); ++j) {
            w.begin_object();
            w.kv("j", i + 1);
            w.kv("k", j + 1);
            w.kv("integral", report.pair_integrals(i, j));
            w.end_object();
        }
    w.end_array();
    w.kv("majorant_integral", report.majorant_integral);
    w.kv("boundary_max", report.boundary_max);
    w.kv("tail_estimate", report.tail_estimate);
    w.kv("boundary_threshold", 1e-6);
    w.kv("pass", report.pass);
    w.end_object();
    return w.str();
}

namespace {

double pget(const std::map<std::string, double>& p, const std::string& k, double dflt) {
    auto it = p.find(k);
    return it == p.end() ? dflt : it->second;
}

std::vector<double> scales_for(const std::map<std::string, std::vector<double>>& lists, int m,
                               double fallback) {
    auto it = lists.find("scales");
    std::vector<double> scales(std::size_t(m), fallback);
    if (it != lists.end()) {
        if (int(it->second.size()) == 1) {
            scales.assign(std::size_t(m), it->second[0]);
        } else if (int(it->second.size()) == m) {
            scales = it->second;
        } else {
            throw ConfigError("model.scales: expected 1 or m entries");
        }
    }
    for (double s : scales)
        if (s <= 0) throw ConfigError("model.scales: length scales must be positive");
    return scales;
}

double norm2(std::span<const double> x) {
    double q = 0.0;
    for (double v : x) q += v * v;
    return q;
}

}  // namespace

CovarianceModel make_covariance(const std::string& kind, int n, int m,
                                const std::map<std::string, double>& params,
                                const std::map<std::string, std::vector<double>>& params_list) {
    if (n < 1 || n > 3) throw ConfigError("model.n: 1 <= n <= 3");
    if (m < 1 || m > 4) throw ConfigError("model.m: 1 <= m <= 4");
    CovarianceModel model;
    model.n = n;
    model.m = m;
    model.id = kind;
    if (kind.rfind("spectral:", 0) == 0) {
        std::map<std::string, double> sp = params;
        sp["n"] = double(n);
        auto spec = std::make_shared<SpectralModel>(make_spectral(kind.substr(9), sp));
        if (spec->m() != m) throw ConfigError("model.m: spectral kind has m=" +
                                              std::to_string(spec->m()));
        return covariance_from_spectral(spec, int(pget(params, "freq_points", 4096)),
                                        pget(params, "decay_radius", 12.0));
    }
    const double amplitude = pget(params, "amplitude", 1.0);
    if (kind == "gaussian") {
        const auto scales = scales_for(params_list, m, pget(params, "scale", 1.0));
        double max_scale = 0.0;
        for (double s : scales) max_scale = std::max(max_scale, s);
        model.decay_radius = pget(params, "decay_radius", 6.0 * max_scale);
        model.whitened = amplitude == 1.0;
        model.eval = [scales, amplitude](std::span<const double> x, Mat& r) {
            const double q = norm2(x);
            for (int j = 0; j < int(scales.size()); ++j)
                r(j, j) = amplitude * std::exp(-q / (2.0 * scales[std::size_t(j)] *
                                                     scales[std::size_t(j)]));
        };
    } else if (kind == "exponential") {
        const auto scales = scales_for(params_list, m, pget(params, "scale", 1.0));
        double max_scale = 0.0;
        for (double s : scales) max_scale = std::max(max_scale, s);
        model.decay_radius = pget(params, "decay_radius", 15.0 * max_scale);
        model.whitened = true;
        model.eval = [scales](std::span<const double> x, Mat& r) {
            const double dist = std::sqrt(norm2(x));
            for (int j = 0; j < int(scales.size()); ++j)
                r(j, j) = std::exp(-dist / scales[std::size_t(j)]);
        };
    } else if (kind == "triangular") {
        const auto scales = scales_for(params_list, m, pget(params, "scale", 1.0));
        double max_scale = 0.0;
        for (double s : scales) max_scale = std::max(max_scale, s);
        model.decay_radius = pget(params, "decay_radius", 1.5 * max_scale);
        model.whitened = true;
        model.eval = [scales](std::span<const double> x, Mat& r) {
            for (int j = 0; j < int(scales.size()); ++j) {
                double v = 1.0;
                for (double xi : x) v *= std::max(0.0, 1.0 - std::abs(xi) / scales[std::size_t(j)]);
                r(j, j) = v;
            }
        };
    } else if (kind == "cauchy") {
        const double scale = pget(params, "scale", 1.0);
        const double gamma = pget(params, "gamma", 0.3);
        if (gamma <= 0) throw ConfigError("model.gamma: must be positive");
        model.decay_radius = pget(params, "decay_radius", 10.0 * scale);
        model.whitened = true;
        model.eval = [scale, gamma, m](std::span<const double> x, Mat& r) {
            const double v = std::pow(1.0 + norm2(x) / (scale * scale), -gamma);
            for (int j = 0; j < m; ++j) r(j, j) = v;
        };
    } else if (kind == "correlated_gaussian") {
        if (m != 2) throw ConfigError("model.m: correlated_gaussian requires m = 2");
        const double scale = pget(params, "scale", 1.0);
        const double rho = pget(params, "rho", 0.5);
        if (std::abs(rho) >= 1.0) throw ConfigError("model.rho: need |rho| < 1");
        model.decay_radius = pget(params, "decay_radius", 6.0 * scale);
        model.whitened = false;
        model.eval = [scale, rho](std::span<const double> x, Mat& r) {
            const double g = std::exp(-norm2(x) / (2.0 * scale * scale));
            r(0, 0) = g;
            r(1, 1) = g;
            r(0, 1) = rho * g;
            r(1, 0) = rho * g;
        };
    } else {
        throw ConfigError("model.kind: unknown covariance model '" + kind + "'");
    }
    return model;
}

CovarianceModel covariance_from_spectral(std::shared_ptr<const SpectralModel> spec,
                                         int freq_points, double decay_radius) {
    if (!spec->normalized()) throw ModelError("spectral model must be normalized");
    const int n = spec->n(), m = spec->m();
    // Symmetric grid including zero.
    const std::int64_t pts = freq_points % 2 == 0 ? freq_points + 1 : freq_points;
    const double t_max = spec->t_max();
    const double h = 2.0 * t_max / double(pts - 1);
    std::int64_t total = 1;
    for (int axis = 0; axis < n; ++axis) total *= pts;
    const int npairs = m * (m + 1) / 2;

    // Weighted amplitude products on the frequency grid, pair-major.
    auto products = std::make_shared<std::vector<double>>(std::size_t(total) * npairs);
    auto freq = std::make_shared<std::vector<double>>(std::size_t(total) * n);
    {
        std::vector<double> t(std::size_t(n), 0.0), a(std::size_t(m), 0.0);
        for (std::int64_t node = 0; node < total; ++node) {
            std::int64_t rest = node;
            double w = 1.0;
            for (int axis = n - 1; axis >= 0; --axis) {
                const std::int64_t i = rest % pts;
                rest /= pts;
                t[std::size_t(axis)] = -t_max + double(i) * h;
                w *= (i == 0 || i == pts - 1) ? 0.5 * h : h;
                (*freq)[std::size_t(node) * n + axis] = t[std::size_t(axis)];
            }
            spec->amplitude(t, a);
            int p = 0;
            for (int j = 0; j < m; ++j)
                for (int k = j; k < m; ++k)
                    (*products)[std::size_t(node) * npairs + p++] =
                        w * a[std::size_t(j)] * a[std::size_t(k)];
        }
    }

    CovarianceModel model;
    model.n = n;
    model.m = m;
    model.id = spec->id();
    model.whitened = true;
    model.decay_radius = decay_radius;
    model.eval = [n, m, npairs, total, pts, h, t_max, products, freq](
                     std::span<const double> x, Mat& r) {
        thread_local std::vector<double> acc;
        acc.assign(std::size_t(npairs), 0.0);
        if (n == 1) {
            // Rotation recurrence: cos(t_i x) with t_i = -T + i h.
            const std::complex<double> step(std::cos(h * x[0]), std::sin(h * x[0]));
            std::complex<double> phase(std::cos(-t_max * x[0]), std::sin(-t_max * x[0]));
            const double* prod = products->data();
            for (std::int64_t i = 0; i < total; ++i) {
                const double c = phase.real();
                for (int p = 0; p < npairs; ++p) acc[std::size_t(p)] += prod[p] * c;
                prod += npairs;
                phase *= step;
            }
        } else {
            const double* prod = products->data();
            const double* tv = freq->data();
            for (std::int64_t i = 0; i < total; ++i) {
                double dot = 0.0;
                for (int axis = 0; axis < n; ++axis) dot += tv[axis] * x[std::size_t(axis)];
                const double c = std::cos(dot);
                for (int p = 0; p < npairs; ++p) acc[std::size_t(p)] += prod[p] * c;
                prod += npairs;
                tv += n;
            }
        }
        int p = 0;
        for (int j = 0; j < m; ++j)
            for (int k = j; k < m; ++k) {
                r(j, k) = acc[std::size_t(p)];
                r(k, j) = acc[std::size_t(p)];
                ++p;
            }
        (void)pts;
    };
    return model;
}

}  // namespace bm
