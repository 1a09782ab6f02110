#include "bmfield/hermite.hpp"

#include <string>

#include "bmfield/errors.hpp"

namespace bm {

namespace {
constexpr int kDegreeCap = 60;
}

double hermite_value(int n, double x) {
    if (n < 0) throw UnsupportedDegree("Hermite degree must be nonnegative");
    if (n > kDegreeCap)
        throw UnsupportedDegree("Hermite degree cap is " + std::to_string(kDegreeCap) +
                                ", got " + std::to_string(n));
    double prev = 1.0;  // H_0
    if (n == 0) return prev;
    double cur = x;  // H_1
    for (int k = 1; k < n; ++k) {
        const double next = x * cur - double(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

void hermite_values(double x, std::span<double> out) {
    if (out.empty()) return;
    if (int(out.size()) - 1 > kDegreeCap)
        throw UnsupportedDegree("Hermite degree cap exceeded in hermite_values");
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = x;
    for (std::size_t k = 1; k + 1 < out.size(); ++k)
        out[k + 1] = x * out[k] - double(k) * out[k - 1];
}

std::vector<std::vector<double>> hermite_monomial_table(int n_max) {
    if (n_max > 20) throw UnsupportedDegree("monomial table supported for degree <= 20");
    std::vector<std::vector<double>> table(std::size_t(n_max) + 1);
    table[0] = {1.0};
    if (n_max == 0) return table;
    table[1] = {0.0, 1.0};
    for (int n = 1; n < n_max; ++n) {
        std::vector<double> next(std::size_t(n) + 2, 0.0);
        for (int k = 0; k <= n; ++k) {
            next[std::size_t(k) + 1] += table[std::size_t(n)][std::size_t(k)];
            if (k < int(table[std::size_t(n) - 1].size()))
                next[std::size_t(k)] -= double(n) * table[std::size_t(n) - 1][std::size_t(k)];
        }
        table[std::size_t(n) + 1] = std::move(next);
    }
    return table;
}

double multi_hermite_value(const MultiIndex& a, std::span<const double> x) {
    if (a.dim() != int(x.size()))
        throw DimensionMismatch("multi-index dimension " + std::to_string(a.dim()) +
                                " does not match point dimension " + std::to_string(x.size()));
    double prod = 1.0;
    for (int i = 0; i < a.dim(); ++i) prod *= hermite_value(a[i], x[std::size_t(i)]);
    return prod;
}

}  // namespace bm
