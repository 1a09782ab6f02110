#include "bmfield/gauss_hermite.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bmfield/errors.hpp"

namespace bm {

// Nodes are found by Newton iteration on the normalized physicists'
// polynomials (recurrence kept in the orthonormal scaling to avoid overflow),
// then rescaled to the variance-1 weight: x -> sqrt(2) x, w -> w / sqrt(pi).
GaussHermiteRule gauss_hermite(int order) {
    if (order < 1 || order > 256)
        throw QuadratureError("Gauss-Hermite order must be in [1, 256], got " +
                              std::to_string(order));
    const int n = order;
    const std::size_t un = static_cast<std::size_t>(n);
    std::vector<double> x(un), w(un);
    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    const int half = (n + 1) / 2;
    double z = 0.0, pp = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(double(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * x[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * x[1];
        } else {
            z = 2.0 * z - x[std::size_t(i) - 2];
        }
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15 * (1.0 + std::abs(z))) break;
        }
        x[std::size_t(i)] = z;
        x[std::size_t(n) - 1 - i] = -z;
        w[std::size_t(i)] = 2.0 / (pp * pp);
        w[std::size_t(n) - 1 - i] = w[std::size_t(i)];
    }
    GaussHermiteRule rule;
    rule.order = n;
    rule.nodes.resize(std::size_t(n));
    rule.weights.resize(std::size_t(n));
    const double sqrt2 = std::numbers::sqrt2;
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        // Ascending node order.
        rule.nodes[std::size_t(i)] = -sqrt2 * x[std::size_t(i)];
        rule.weights[std::size_t(i)] = w[std::size_t(i)] * inv_sqrt_pi;
    }
    return rule;
}

}  // namespace bm
