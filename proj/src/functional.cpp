#include "bmfield/functional.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bmfield/errors.hpp"
#include "bmfield/hermite.hpp"
#include "bmfield/stats.hpp"

namespace bm {

namespace {
int axis_param(const std::map<std::string, double>& params, const std::string& key, int m,
               int fallback) {
    auto it = params.find(key);
    int axis = it == params.end() ? fallback : int(it->second);
    if (axis < 1 || axis > m)
        throw ConfigError("functional." + key + ": axis " + std::to_string(axis) +
                          " out of range for m=" + std::to_string(m));
    return axis - 1;
}

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}
}  // namespace

Functional make_functional(const std::string& name, int m,
                           const std::map<std::string, double>& params) {
    if (m < 1) throw ConfigError("functional.m: must be >= 1");
    Functional g;
    g.m = m;
    g.label = name;
    if (name == "coordinate") {
        const int axis = axis_param(params, "axis", m, 1);
        g.eval = [axis](std::span<const double> x) { return x[std::size_t(axis)]; };
        g.integrability = 16.0;
    } else if (name == "hermite") {
        const int axis = axis_param(params, "axis", m, 1);
        const int degree = int(param_or(params, "degree", 2));
        if (degree < 1 || degree > 20)
            throw ConfigError("functional.degree: hermite degree must be in [1, 20]");
        g.eval = [axis, degree](std::span<const double> x) {
            return hermite_value(degree, x[std::size_t(axis)]);
        };
        g.integrability = 16.0;
        g.label = "hermite" + std::to_string(degree);
    } else if (name == "product") {
        const int a1 = axis_param(params, "axis1", m, 1);
        const int a2 = axis_param(params, "axis2", m, std::min(2, m));
        g.eval = [a1, a2](std::span<const double> x) {
            return x[std::size_t(a1)] * x[std::size_t(a2)];
        };
        g.integrability = 16.0;
    } else if (name == "abs_centered") {
        const double center = std::sqrt(2.0 / std::numbers::pi);
        g.eval = [center](std::span<const double> x) { return std::abs(x[0]) - center; };
        g.integrability = 16.0;
        g.discontinuous = true;  // kink at 0; slow Gauss-Hermite convergence
    } else if (name == "sign") {
        g.eval = [](std::span<const double> x) { return x[0] > 0 ? 1.0 : (x[0] < 0 ? -1.0 : 0.0); };
        g.integrability = 16.0;
        g.discontinuous = true;
    } else if (name == "indicator") {
        const double tau = param_or(params, "tau", 0.0);
        const double center = normal_cdf(tau);
        g.eval = [tau, center](std::span<const double> x) {
            return (x[0] <= tau ? 1.0 : 0.0) - center;
        };
        g.integrability = 16.0;
        g.discontinuous = true;
    } else {
        throw ConfigError("functional.name: unknown functional '" + name + "'");
    }
    return g;
}

Functional compose_linear(const Functional& g, const Mat& a) {
    if (a.rows() != g.m || a.cols() != g.m)
        throw DimensionMismatch("compose_linear: matrix must be m x m");
    Functional out = g;
    out.label = g.label + "~lin";
    const Mat mat = a;
    const auto inner = g.eval;
    const int m = g.m;
    out.eval = [mat, inner, m](std::span<const double> y) {
        std::vector<double> x(static_cast<std::size_t>(m));
        mat_vec_mul(mat, y, x);
        return inner(x);
    };
    return out;
}

}  // namespace bm
