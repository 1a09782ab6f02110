#pragma once

#include <vector>

namespace bm {

// Gauss-Hermite rule in the probabilists' normalization: for smooth f,
//   integral f(x) dgamma(x)  ~=  sum_i weights[i] * f(nodes[i]),
// where gamma is the standard normal measure. Weights sum to 1. Exact for
// polynomials of degree <= 2*order - 1.
struct GaussHermiteRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int order);

}  // namespace bm
