#include "bmfield/diagram.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <string>

#include "bmfield/errors.hpp"

namespace bm {

namespace {

struct TableEnumerator {
    int m = 0;
    const MultiIndex* a = nullptr;
    std::vector<int> col_remaining;
    std::vector<int> k;  // row-major current table
    std::vector<std::uint64_t> row_multinomial;
    std::int64_t visited = 0;
    std::int64_t budget = 0;

    // visit(k, integer_coefficient) with coefficient = a! b! / prod K_ij!.
    template <class Visit>
    void run(const MultiIndex& bb, Visit&& visit) {
        std::uint64_t b_fact = bb.factorial();
        recurse(0, b_fact, std::forward<Visit>(visit));
    }

    template <class Visit>
    void recurse(int row, std::uint64_t b_fact, Visit&& visit) {
        if (row == m) {
            if (++visited > budget)
                throw BudgetExceeded("pair_expectation: margin-table budget of " +
                                     std::to_string(budget) + " tables exceeded");
            std::uint64_t coeff = b_fact;
            for (int i = 0; i < m; ++i) coeff *= row_multinomial[std::size_t(i)];
            visit(k, coeff);
            return;
        }
        fill_row(row, 0, (*a)[row], exact_factorial((*a)[row]), b_fact,
                 std::forward<Visit>(visit));
    }

    // Distribute `remaining` units of row `row` over columns >= col.
    template <class Visit>
    void fill_row(int row, int col, int remaining, std::uint64_t mult, std::uint64_t b_fact,
                  Visit&& visit) {
        if (col == m - 1) {
            if (remaining > col_remaining[std::size_t(col)]) return;
            k[std::size_t(row) * m + col] = remaining;
            col_remaining[std::size_t(col)] -= remaining;
            row_multinomial[std::size_t(row)] = mult / exact_factorial(remaining);
            recurse(row + 1, b_fact, std::forward<Visit>(visit));
            col_remaining[std::size_t(col)] += remaining;
            return;
        }
        const int cap = std::min(remaining, col_remaining[std::size_t(col)]);
        for (int v = 0; v <= cap; ++v) {
            k[std::size_t(row) * m + col] = v;
            col_remaining[std::size_t(col)] -= v;
            fill_row(row, col + 1, remaining - v, mult / exact_factorial(v), b_fact,
                     std::forward<Visit>(visit));
            col_remaining[std::size_t(col)] += v;
        }
    }
};

void validate_pair(const MultiIndex& a, const MultiIndex& b, const Mat& rho) {
    if (a.dim() != b.dim() || a.dim() != rho.rows() || rho.rows() != rho.cols())
        throw DimensionMismatch("pair_expectation: a, b and rho must share dimension m");
    if (a.dim() > 4) throw ConfigError("pair_expectation: m <= 4 required");
    if (a.order() > 12 || b.order() > 12)
        throw UnsupportedDegree("pair_expectation: |a|, |b| <= 12 required");
}

}  // namespace

double pair_expectation(const MultiIndex& a, const MultiIndex& b, const Mat& rho,
                        std::int64_t table_budget) {
    validate_pair(a, b, rho);
    if (a.order() != b.order()) return 0.0;
    // Canonical orientation: the transposed call enumerates the exact same
    // sum, so the symmetry identity holds bit for bit.
    if (b < a) return pair_expectation(b, a, rho.transposed(), table_budget);
    const int m = a.dim();
    TableEnumerator en;
    en.m = m;
    en.a = &a;
    en.col_remaining.assign(std::size_t(m), 0);
    for (int j = 0; j < m; ++j) en.col_remaining[std::size_t(j)] = b[j];
    en.k.assign(std::size_t(m) * m, 0);
    en.row_multinomial.assign(std::size_t(m), 1);
    en.budget = table_budget;
    double total = 0.0;
    en.run(b, [&](const std::vector<int>& k, std::uint64_t coeff) {
        double prod = double(coeff);
        for (int i = 0; i < m * m; ++i) {
            const int e = k[std::size_t(i)];
            if (e == 0) continue;
            const double r = rho(i / m, i % m);
            double p = r;
            for (int t = 1; t < e; ++t) p *= r;
            prod *= p;
        }
        total += prod;
    });
    return total;
}

double CovariancePolynomial::eval(const Mat& rho) const {
    double total = 0.0;
    for (const Term& t : terms_) {
        double prod = t.w;
        for (int i = 0; i < m_ * m_; ++i) {
            const int e = t.k[std::size_t(i)];
            if (e == 0) continue;
            const double r = rho(i / m_, i % m_);
            double p = r;
            for (int j = 1; j < e; ++j) p *= r;
            prod *= p;
        }
        total += prod;
    }
    return total;
}

CovariancePolynomial level_covariance_polynomial(const std::vector<ChaosTerm>& level, int m,
                                                 std::int64_t table_budget) {
    std::map<std::array<std::uint8_t, 16>, double> merged;
    for (const auto& ta : level) {
        for (const auto& tb : level) {
            if (ta.a.order() != tb.a.order()) continue;
            TableEnumerator en;
            en.m = m;
            en.a = &ta.a;
            en.col_remaining.assign(std::size_t(m), 0);
            for (int j = 0; j < m; ++j) en.col_remaining[std::size_t(j)] = tb.a[j];
            en.k.assign(std::size_t(m) * m, 0);
            en.row_multinomial.assign(std::size_t(m), 1);
            en.budget = table_budget;
            const double cc = ta.c * tb.c;
            en.run(tb.a, [&](const std::vector<int>& k, std::uint64_t coeff) {
                std::array<std::uint8_t, 16> key{};
                for (int i = 0; i < m * m; ++i) key[std::size_t(i)] = std::uint8_t(k[std::size_t(i)]);
                merged[key] += cc * double(coeff);
            });
        }
    }
    std::vector<CovariancePolynomial::Term> terms;
    terms.reserve(merged.size());
    for (const auto& [key, w] : merged)
        if (w != 0.0) terms.push_back({key, w});
    return CovariancePolynomial(m, std::move(terms));
}

bool is_feasible_cross_covariance(const Mat& rho, double tol) {
    const int m = rho.rows();
    if (rho.cols() != m) return false;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (std::abs(rho(i, j)) > 1.0 + tol) return false;
    Mat joint(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        joint(i, i) = 1.0;
        joint(m + i, m + i) = 1.0;
        for (int j = 0; j < m; ++j) {
            joint(i, m + j) = rho(i, j);
            joint(m + j, i) = rho(i, j);
        }
    }
    return min_eigenvalue(joint) >= -tol;
}

}  // namespace bm
