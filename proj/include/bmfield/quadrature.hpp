#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bmfield/parallel.hpp"

namespace bm {

// Tensor-product trapezoid rule on [-R, R]^n with step halving. Convergence
// requires two consecutive halvings inside rel_tol, which protects smooth
// oscillatory integrands from aliasing on coarse grids.
struct BoxQuadratureOptions {
    double rel_tol = 1e-6;
    int start_level = 6;              // 2^level + 1 points per axis
    int max_level = 13;
    std::int64_t node_budget = std::int64_t(1) << 22;
    Exec exec = Exec::Parallel;
};

struct BoxQuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    std::int64_t nodes_used = 0;
    int level = 0;
};

BoxQuadratureResult integrate_box(int n, double half_width,
                                  const std::function<double(std::span<const double>)>& f,
                                  const BoxQuadratureOptions& opts = {});

struct BoxQuadratureVecResult {
    std::vector<double> values;
    double error_estimate = 0.0;
    bool converged = false;
    std::int64_t nodes_used = 0;
    int level = 0;
};

BoxQuadratureVecResult integrate_box_vec(
    int n, double half_width, std::size_t dim,
    const std::function<void(std::span<const double>, std::span<double>)>& f,
    const BoxQuadratureOptions& opts = {});

}  // namespace bm
