#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bmfield/chaos.hpp"
#include "bmfield/linalg.hpp"
#include "bmfield/multiindex.hpp"

namespace bm {

// Closed form for E[H_a(X) H_b(Y)] with X, Y jointly Gaussian, each standard
// in R^m, rho_ij = E[X_i Y_j]: zero unless |a| = |b|, otherwise the sum over
// nonnegative integer m x m matrices K with row sums a and column sums b of
//   a! b! / prod K_ij!  *  prod rho_ij^{K_ij}.
// The margin-table enumeration is recursive row by row; `table_budget` caps
// the number of completed tables visited before BudgetExceeded.
double pair_expectation(const MultiIndex& a, const MultiIndex& b, const Mat& rho,
                        std::int64_t table_budget = 10'000'000);

// Pre-merged polynomial sum_t w_t prod_ij rho_ij^{k_t,ij} representing the
// level covariance sum_{a,b} c_a c_b E[H_a(X) H_b(Y)].
class CovariancePolynomial {
  public:
    struct Term {
        std::array<std::uint8_t, 16> k{};  // row-major exponents, m*m used
        double w = 0.0;
    };

    CovariancePolynomial() = default;
    CovariancePolynomial(int m, std::vector<Term> terms)
        : m_(m), terms_(std::move(terms)) {}

    double eval(const Mat& rho) const;
    int m() const { return m_; }
    std::size_t term_count() const { return terms_.size(); }

  private:
    int m_ = 0;
    std::vector<Term> terms_;
};

CovariancePolynomial level_covariance_polynomial(const std::vector<ChaosTerm>& level, int m,
                                                 std::int64_t table_budget = 10'000'000);

// Feasibility of a cross-covariance block: |rho_ij| <= 1 and the 2m x 2m
// matrix [[I, rho], [rho^T, I]] PSD down to -tol.
bool is_feasible_cross_covariance(const Mat& rho, double tol = 1e-8);

}  // namespace bm
