#include "bmfield/quadrature.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bmfield/errors.hpp"

namespace bm {

namespace {

// One trapezoid pass at 2^level + 1 points per axis.
void trapezoid_pass(int n, double half_width, int level, std::size_t dim,
                    const std::function<void(std::span<const double>, std::span<double>)>& f,
                    double* out, Exec exec) {
    const std::int64_t pts = (std::int64_t(1) << level) + 1;
    const double h = 2.0 * half_width / double(pts - 1);
    std::int64_t total = 1;
    for (int axis = 0; axis < n; ++axis) total *= pts;
    det_sum_vec(
        total, dim,
        [&](std::int64_t node, double* acc) {
            thread_local std::vector<double> x, fx;
            x.assign(std::size_t(n), 0.0);
            fx.assign(dim, 0.0);
            std::int64_t rest = node;
            double w = 1.0;
            for (int axis = n - 1; axis >= 0; --axis) {
                const std::int64_t i = rest % pts;
                rest /= pts;
                x[std::size_t(axis)] = -half_width + double(i) * h;
                w *= (i == 0 || i == pts - 1) ? 0.5 * h : h;
            }
            f(x, fx);
            for (std::size_t d = 0; d < dim; ++d) acc[d] += w * fx[d];
        },
        out, exec);
}

double vec_delta(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max(1.0, std::abs(b[i]));
        d = std::max(d, std::abs(a[i] - b[i]) / scale);
    }
    return d;
}

}  // namespace

BoxQuadratureVecResult integrate_box_vec(
    int n, double half_width, std::size_t dim,
    const std::function<void(std::span<const double>, std::span<double>)>& f,
    const BoxQuadratureOptions& opts) {
    if (n < 1 || n > 3)
        throw QuadratureError("box quadrature supports 1 <= n <= 3, got " + std::to_string(n));
    if (half_width <= 0.0) throw QuadratureError("box quadrature needs positive half-width");
    BoxQuadratureVecResult res;
    res.values.assign(dim, 0.0);
    std::vector<double> prev(dim, 0.0), cur(dim, 0.0);
    int good_halvings = 0;
    double last_delta = std::numeric_limits<double>::infinity();
    for (int level = opts.start_level;; ++level) {
        std::int64_t total = 1;
        const std::int64_t pts = (std::int64_t(1) << level) + 1;
        for (int axis = 0; axis < n; ++axis) total *= pts;
        if (total > opts.node_budget || level > opts.max_level) break;
        trapezoid_pass(n, half_width, level, dim, f, cur.data(), opts.exec);
        res.nodes_used += total;
        res.level = level;
        if (level > opts.start_level) {
            last_delta = vec_delta(cur, prev);
            good_halvings = last_delta < opts.rel_tol ? good_halvings + 1 : 0;
        }
        prev = cur;
        if (good_halvings >= 2) {
            res.converged = true;
            break;
        }
    }
    res.values = prev;
    res.error_estimate = last_delta;
    return res;
}

BoxQuadratureResult integrate_box(int n, double half_width,
                                  const std::function<double(std::span<const double>)>& f,
                                  const BoxQuadratureOptions& opts) {
    auto vec = integrate_box_vec(
        n, half_width, 1,
        [&](std::span<const double> x, std::span<double> out) { out[0] = f(x); }, opts);
    BoxQuadratureResult res;
    res.value = vec.values[0];
    res.error_estimate = vec.error_estimate;
    res.converged = vec.converged;
    res.nodes_used = vec.nodes_used;
    res.level = vec.level;
    return res;
}

}  // namespace bm
