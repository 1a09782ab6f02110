#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>

#include "bmfield/linalg.hpp"

namespace bm {

// A real-valued functional of an m-dimensional standard Gaussian vector.
// `integrability` is the L^p(gamma_m) class the user claims for it; we only
// ever verify finiteness of quadrature estimates, the claim itself is taken
// on trust and echoed into reports.
struct Functional {
    std::string label;
    int m = 1;
    std::function<double(std::span<const double>)> eval;
    double integrability = 8.0;
    bool discontinuous = false;

    double operator()(std::span<const double> x) const { return eval(x); }
};

// Built-in registry. Names:
//   coordinate(axis)        x_axis
//   hermite(axis, degree)   H_degree(x_axis)
//   product(axis1, axis2)   x_axis1 * x_axis2
//   abs_centered            |x_1| - sqrt(2/pi)
//   sign                    sign(x_1)
//   indicator(tau)          1{x_1 <= tau} - Phi(tau)
// Axes are 1-based in parameters.
Functional make_functional(const std::string& name, int m,
                           const std::map<std::string, double>& params = {});

// G'(y) = G(A y); used by whitening.
Functional compose_linear(const Functional& g, const Mat& a);

}  // namespace bm
