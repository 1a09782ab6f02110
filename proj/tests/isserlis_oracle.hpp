#pragma once

// Brute-force oracles for the diagram-formula tests: multivariate Hermite
// products are expanded into monomials and Gaussian moments are computed by
// summing over all pair partitions. Test-only code, deliberately independent
// of the margin-table enumeration it checks.

#include <cstdint>
#include <vector>

#include "bmfield/hermite.hpp"
#include "bmfield/linalg.hpp"
#include "bmfield/multiindex.hpp"
#include "bmfield/philox.hpp"

namespace testutil {

// E[z_{v_1} ... z_{v_k}] for a centered Gaussian vector with covariance cov,
// by recursion over pairings of the first variable.
inline double wick_moment(std::vector<int>& vars, const bm::Mat& cov) {
    const std::size_t k = vars.size();
    if (k == 0) return 1.0;
    if (k % 2 == 1) return 0.0;
    const int first = vars[0];
    double total = 0.0;
    for (std::size_t j = 1; j < k; ++j) {
        std::vector<int> rest;
        rest.reserve(k - 2);
        for (std::size_t i = 1; i < k; ++i)
            if (i != j) rest.push_back(vars[i]);
        total += cov(first, vars[j]) * wick_moment(rest, cov);
    }
    return total;
}

// E[H_a(X) H_b(Y)] with X, Y standard in R^m and E[X_i Y_j] = rho_ij.
inline double isserlis_pair_expectation(const bm::MultiIndex& a, const bm::MultiIndex& b,
                                        const bm::Mat& rho) {
    const int m = a.dim();
    bm::Mat joint(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        joint(i, i) = 1.0;
        joint(m + i, m + i) = 1.0;
        for (int j = 0; j < m; ++j) {
            joint(i, m + j) = rho(i, j);
            joint(m + j, i) = rho(i, j);
        }
    }
    int max_degree = 0;
    for (int i = 0; i < m; ++i) max_degree = std::max({max_degree, a[i], b[i]});
    const auto table = bm::hermite_monomial_table(max_degree);

    // Iterate over the monomial choices of each univariate factor.
    std::vector<int> pick(std::size_t(2 * m), 0);
    double total = 0.0;
    while (true) {
        double coeff = 1.0;
        std::vector<int> vars;
        for (int i = 0; i < 2 * m; ++i) {
            const int degree = i < m ? a[i] : b[i - m];
            // Hermite polynomials have the parity of their degree.
            const int power = degree - 2 * pick[std::size_t(i)];
            coeff *= table[std::size_t(degree)][std::size_t(power)];
            for (int rep = 0; rep < power; ++rep) vars.push_back(i);
        }
        if (coeff != 0.0) total += coeff * wick_moment(vars, joint);

        // Advance the mixed-radix counter over monomial picks.
        int axis = 0;
        for (; axis < 2 * m; ++axis) {
            const int degree = axis < m ? a[axis] : b[axis - m];
            if (pick[std::size_t(axis)] < degree / 2) {
                ++pick[std::size_t(axis)];
                break;
            }
            pick[std::size_t(axis)] = 0;
        }
        if (axis == 2 * m) break;
    }
    return total;
}

// Random cross-covariance with operator norm < 1, hence jointly feasible.
inline bm::Mat random_feasible_rho(int m, const bm::CounterRng& rng, std::uint64_t draw) {
    bm::Mat rho(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            rho(i, j) =
                2.0 * rng.uniform(draw * 64 + std::uint64_t(i * m + j), 17) - 1.0;
    const bm::Mat gram = rho.transposed() * rho;
    const double top = bm::eigh(gram).values.back();
    const double margin = 1.0 + rng.uniform(draw * 64 + 63, 18);
    if (top > 0) {
        const double scale = 1.0 / (std::sqrt(top) * margin);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) rho(i, j) *= scale;
    }
    return rho;
}

}  // namespace testutil
